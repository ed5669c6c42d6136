#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace cocycle {

/// Neumaier compensated summation; long orbit averages keep full precision.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through (x_i, y_i).
LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Sample mean and standard error of the mean (0 for a single value).
MeanStderr mean_stderr(const std::vector<double>& values);

}  // namespace cocycle
