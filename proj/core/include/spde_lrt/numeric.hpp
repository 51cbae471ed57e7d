#pragma once

#include <cmath>
#include <span>

namespace spde_lrt {

// Neumaier's variant of Kahan summation. The running compensation also
// captures the case where the addend is larger than the partial sum.
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  explicit constexpr CompensatedSum(double init) : sum_(init) {}

  constexpr void add(double x) noexcept {
    const double t = sum_ + x;
    if (abs_(sum_) >= abs_(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  constexpr CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  constexpr double value() const noexcept { return sum_ + comp_; }

 private:
  static constexpr double abs_(double x) noexcept { return x < 0 ? -x : x; }

  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

}  // namespace spde_lrt
