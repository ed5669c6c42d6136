#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cocycle {

enum class ErrorKind {
  PreconditionViolation,
  EmptyCore,
  SingularValue,
  NoConvergence,
  DegenerateSplit,
  NonTransverse,
  NoReturns,
  MinorVanishes,
  ResonantEigenvalues,
  BumpOverlap,
  RankMismatch,
  InsufficientEccentricity,
  KernelHit,
  ZeroMatrix,
  UnknownOp,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for errors raised by numerical breakdown rather than bad input.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace cocycle
