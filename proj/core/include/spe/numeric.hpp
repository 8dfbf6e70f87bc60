#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace spe {

/// Neumaier-compensated running sum. Result is independent of summation
/// order to within a few ulps, which keeps parallel reductions reproducible.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      carry_ += (sum_ - t) + value;
    } else {
      carry_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double value) {
    add(value);
    return *this;
  }

  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.carry_);
  }

  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

inline double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

}  // namespace spe
