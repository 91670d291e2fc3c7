// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wbern/compensated_sum.hpp"
#include "wbern/errors.hpp"
#include "wbern/weight.hpp"

namespace wbern {

template <typename F>
concept RealFunction = std::invocable<const F&, double> &&
                       std::convertible_to<std::invoke_result_t<const F&, double>, double>;

/// Abscissa in the closed unit interval.
class UnitPoint {
 public:
  // NOLINTNEXTLINE(google-explicit-constructor)
  UnitPoint(double x) : x_(x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("unit point outside [0,1]: " + std::to_string(x));
  }
  [[nodiscard]] double value() const noexcept { return x_; }
  // NOLINTNEXTLINE(google-explicit-constructor)
  operator double() const noexcept { return x_; }

 private:
  double x_;
};

namespace detail {

// log(n!) - log(sqrt(2 pi n) (n/e)^n)
[[nodiscard]] inline double stirling_error(double n) noexcept {
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (n <= 15.0) {
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - 0.5 * std::log(2.0 * std::numbers::pi);
  }
  const double nn = n * n;
  if (n > 500.0) return (s0 - s1 / nn) / n;
  if (n > 80.0) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35.0) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// Deviance term x log(x / m) + m - x, evaluated without cancellation when x ~ m.
[[nodiscard]] inline double binomial_deviance(double x, double m) noexcept {
  if (std::abs(x - m) < 0.1 * (x + m)) {
    double v = (x - m) / (x + m);
    double s = (x - m) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / m) + m - x;
}

}  // namespace detail

/// Natural log of the basis value p_{nk}(x). Returns -inf where the value is exactly zero.
///
/// Uses the saddle-point form of the binomial mass: the log-binomial and the
/// two power terms are combined as deviances so that no large logarithms cancel.
/// This keeps the relative error near machine precision for n well beyond 10^5.
[[nodiscard]] inline double log_bernstein_basis(std::size_t n, std::size_t k, UnitPoint point) {
  if (k > n) {
    throw DomainError("bernstein basis index " + std::to_string(k) + " exceeds degree " + std::to_string(n));
  }
  const double x = point;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  // 0^0 = 1 at the endpoints.
  if (x == 0.0) return k == 0 ? 0.0 : -INFINITY;
  if (x == 1.0) return k == n ? 0.0 : -INFINITY;
  if (k == 0) return nd * std::log1p(-x);
  if (k == n) return nd * std::log(x);
  const double q = 1.0 - x;
  const double lc = detail::stirling_error(nd) - detail::stirling_error(kd) - detail::stirling_error(nd - kd) -
                    detail::binomial_deviance(kd, nd * x) - detail::binomial_deviance(nd - kd, nd * q);
  return lc + 0.5 * std::log(nd / (2.0 * std::numbers::pi * kd * (nd - kd)));
}

/// p_{nk}(x) = C(n,k) x^k (1-x)^(n-k).
[[nodiscard]] inline double bernstein_basis(std::size_t n, std::size_t k, UnitPoint x) {
  return std::exp(log_bernstein_basis(n, k, x));
}

/// All n+1 basis values at x.
[[nodiscard]] inline std::vector<double> bernstein_basis_all(std::size_t n, UnitPoint x) {
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = bernstein_basis(n, k, x);
  return out;
}

/// Samples f(k/n), k = 0..n, of a function on the uniform grid of degree n.
class SampleVector {
 public:
  explicit SampleVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw DomainError("sample vector needs degree n >= 1");
    const double n = static_cast<double>(values_.size() - 1);
    for (std::size_t k = 0; k < values_.size(); ++k) {
      if (!std::isfinite(values_[k])) {
        const double x = static_cast<double>(k) / n;
        throw SampleError(x, "non-finite sample at x = " + std::to_string(x));
      }
    }
  }

  [[nodiscard]] std::size_t degree() const noexcept { return values_.size() - 1; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t k) const noexcept { return values_[k]; }

 private:
  std::vector<double> values_;
};

/// Evaluates f at k/n. A non-finite value is reported as a SampleError carrying k/n.
template <RealFunction F>
[[nodiscard]] SampleVector sample_uniform(const F& f, std::size_t n) {
  if (n == 0) throw DomainError("sample_uniform: degree must be positive");
  std::vector<double> v(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(n);
    v[k] = static_cast<double>(f(x));
    if (!std::isfinite(v[k])) throw SampleError(x, "non-finite sample at x = " + std::to_string(x));
  }
  return SampleVector(std::move(v));
}

/// B_n(f, x) from precomputed samples, summed with compensation.
[[nodiscard]] inline double bernstein_apply(const SampleVector& samples, UnitPoint x) {
  const std::size_t n = samples.degree();
  CompensatedSum acc;
  for (std::size_t k = 0; k <= n; ++k) {
    const double p = bernstein_basis(n, k, x);
    if (p != 0.0) acc += samples[k] * p;
  }
  return acc.value();
}

/// Binomial coefficient as a double; exact for the small orders used by finite differences.
[[nodiscard]] inline double binomial_coefficient(std::size_t r, std::size_t k) noexcept {
  if (k > r) return 0.0;
  k = std::min(k, r - k);
  double c = 1.0;
  for (std::size_t j = 1; j <= k; ++j) c = c * static_cast<double>(r - k + j) / static_cast<double>(j);
  return std::round(c);
}

namespace detail {

inline constexpr double kUnitSlack = 1e-14;

[[nodiscard]] inline double checked_point(double t, const char* op) {
  if (t < -kUnitSlack || t > 1.0 + kUnitSlack) {
    throw DomainError(std::string(op) + ": evaluation point " + std::to_string(t) + " outside [0,1]");
  }
  return std::clamp(t, 0.0, 1.0);
}

// sum_k (-1)^k C(r,k) f(point(k)), all points validated first.
template <RealFunction F, typename PointFn>
[[nodiscard]] double alternating_difference(const F& f, std::size_t r, PointFn point, const char* op) {
  std::vector<double> points(r + 1);
  for (std::size_t k = 0; k <= r; ++k) points[k] = checked_point(point(k), op);
  CompensatedSum acc;
  for (std::size_t k = 0; k <= r; ++k) {
    const double term = binomial_coefficient(r, k) * static_cast<double>(f(points[k]));
    acc += (k % 2 == 0) ? term : -term;
  }
  return acc.value();
}

}  // namespace detail

/// Forward difference with leftmost point x: sum_k (-1)^k C(r,k) f(x + (r-k) h).
template <RealFunction F>
[[nodiscard]] double forward_difference(const F& f, double x, double h, std::size_t r) {
  if (!(h > 0.0)) throw DomainError("forward_difference: step must be positive");
  return detail::alternating_difference(
      f, r, [&](std::size_t k) { return x + static_cast<double>(r - k) * h; }, "forward_difference");
}

/// Backward difference with rightmost point x: sum_k (-1)^k C(r,k) f(x - k h).
template <RealFunction F>
[[nodiscard]] double backward_difference(const F& f, double x, double h, std::size_t r) {
  if (!(h > 0.0)) throw DomainError("backward_difference: step must be positive");
  return detail::alternating_difference(
      f, r, [&](std::size_t k) { return x - static_cast<double>(k) * h; }, "backward_difference");
}

/// Symmetric difference with step h phi(x): sum_k (-1)^k C(r,k) f(x + (r/2 - k) h phi(x)).
template <RealFunction F>
[[nodiscard]] double symmetric_difference(const F& f, double x, double h, std::size_t r) {
  if (!(h > 0.0)) throw DomainError("symmetric_difference: step must be positive");
  const double step = h * step_weight(x);
  const double half = 0.5 * static_cast<double>(r);
  return detail::alternating_difference(
      f, r, [&](std::size_t k) { return x + (half - static_cast<double>(k)) * step; }, "symmetric_difference");
}

/// True when every point of the symmetric difference lies in [0,1].
[[nodiscard]] inline bool symmetric_difference_admissible(double x, double h, std::size_t r) noexcept {
  const double reach = 0.5 * static_cast<double>(r) * h * step_weight(x);
  return x - reach >= -detail::kUnitSlack && x + reach <= 1.0 + detail::kUnitSlack;
}

}  // namespace wbern
