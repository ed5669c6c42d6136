#pragma once

#include "cocycle/simplicity.hpp"

namespace bench {

inline cocycle::TheoremCExample theorem_c() {
  cocycle::Matrix r(3, 3);
  r << 0, 0.12, 0.07, 0.09, 0, 0.11, 0.05, 0.10, 0;
  return cocycle::theoremC_example({1.4, 1.1, 0.8}, r, 0.3, {1}, 0);
}

inline cocycle::SkewProduct golden_rotation() {
  return cocycle::SkewProduct(
      cocycle::FiberMapFamily::rotation(2, 0, {0.6180339887498949, 0.41421356237309503}));
}

}  // namespace bench
