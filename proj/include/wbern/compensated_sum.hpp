// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <ranges>
#include <span>

namespace wbern {

/// Error-free transformation: a + b == sum + err exactly (Knuth's TwoSum).
struct TwoSumResult {
  double sum;
  double err;
};

[[nodiscard]] inline TwoSumResult two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

/// a * b == prod + err exactly, via fused multiply-add.
[[nodiscard]] inline TwoSumResult two_prod(double a, double b) noexcept {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

/// Compensated Horner: sum_j c[j] x^j as if evaluated in twice the working precision.
[[nodiscard]] inline double compensated_horner(std::span<const double> c, double x) noexcept {
  if (c.empty()) return 0.0;
  double s = c.back();
  double err = 0.0;
  for (std::size_t j = c.size() - 1; j-- > 0;) {
    const auto [p, pe] = two_prod(s, x);
    const auto [t, se] = two_sum(p, c[j]);
    s = t;
    err = err * x + (pe + se);
  }
  return s + err;
}

/// Accumulates a sum with compensation carried by TwoSum.
///
/// Each addition is split into its rounded sum and the exact rounding error;
/// the errors are summed separately and folded in when the value is read.
/// The result is as accurate as if computed in twice the working precision,
/// then rounded once, which keeps alternating binomial sums close to 1 ulp.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  CompensatedSum& operator+=(double value) noexcept {
    const auto [s, e] = two_sum(sum_, value);
    sum_ = s;
    compensation_ += e;
    return *this;
  }

  CompensatedSum& operator-=(double value) noexcept { return *this += -value; }

  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }
  explicit operator double() const noexcept { return value(); }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

template <std::ranges::input_range R>
[[nodiscard]] double compensated_sum(R&& values) {
  CompensatedSum acc;
  for (double v : values) acc += v;
  return acc.value();
}

}  // namespace wbern
