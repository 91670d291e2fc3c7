// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wbern/compensated_sum.hpp"
#include "wbern/errors.hpp"
#include "wbern/linalg.hpp"

namespace wbern {

inline constexpr std::size_t kMaxSmoothstepOrder = 8;
inline constexpr std::size_t kMaxDeterminantOrder = 4;

/// Row m, column j of the boundary-condition system: the m-th derivative of x^(2r+1+j) at x = 1,
/// i.e. the falling factorial (2r+1+j)(2r+j)...(2r+2+j-m).
[[nodiscard]] inline linalg::Matrix smoothstep_system(std::size_t r) {
  const std::size_t size = 2 * r + 1;
  linalg::Matrix a(size);
  for (std::size_t m = 0; m < size; ++m) {
    for (std::size_t j = 0; j < size; ++j) {
      double entry = 1.0;
      for (std::size_t s = 0; s < m; ++s) entry *= static_cast<double>(2 * r + 1 + j - s);
      a(m, j) = entry;
    }
  }
  return a;
}

/// det of the boundary-condition system; equals prod_{j=2}^{2r} j!.
/// The entries are integers, so fraction-free (Bareiss) elimination in 128-bit
/// integers is exact up to kMaxDeterminantOrder.
[[nodiscard]] inline double determinant_check(std::size_t r) {
  if (r < 1 || r > kMaxDeterminantOrder) {
    throw DomainError("determinant_check: order must lie in [1," + std::to_string(kMaxDeterminantOrder) + "]");
  }
  __extension__ using Int = __int128;
  const std::size_t size = 2 * r + 1;
  std::vector<std::vector<Int>> a(size, std::vector<Int>(size));
  for (std::size_t m = 0; m < size; ++m) {
    for (std::size_t j = 0; j < size; ++j) {
      Int entry = 1;
      for (std::size_t s = 0; s < m; ++s) entry *= static_cast<Int>(2 * r + 1 + j - s);
      a[m][j] = entry;
    }
  }
  Int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < size; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < size && a[p][k] == 0) ++p;
      if (p == size) return 0.0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    }
    prev = a[k][k];
  }
  return static_cast<double>(sign * a[size - 1][size - 1]);
}

/// prod_{j=2}^{2r} j!
[[nodiscard]] inline double superfactorial_product(std::size_t r) {
  double prod = 1.0;
  double fact = 1.0;
  for (std::size_t j = 2; j <= 2 * r; ++j) {
    fact *= static_cast<double>(j);
    prod *= fact;
  }
  return prod;
}

/// The C^{2r} transition polynomial a_1 x^{2r+1} + ... + a_{2r+1} x^{4r+1} on (0,1),
/// extended by 0 to the left and 1 to the right.
class SmoothstepPoly {
 public:
  [[nodiscard]] std::size_t order() const noexcept { return r_; }

  /// a_1..a_{2r+1}: coefficients of x^{2r+1}..x^{4r+1}.
  [[nodiscard]] std::span<const double> coefficients() const noexcept { return a_; }
  [[nodiscard]] std::size_t lowest_power() const noexcept { return 2 * r_ + 1; }

  /// Value of the polynomial piece or one of its derivatives, at any real x.
  [[nodiscard]] double polynomial_derivative(double x, std::size_t order) const {
    const std::size_t base = lowest_power();
    const std::size_t top = base + a_.size() - 1;
    if (order > top) return 0.0;
    // coefficients of the differentiated polynomial by power
    std::vector<double> d(top - order + 1, 0.0);
    for (std::size_t j = 0; j < a_.size(); ++j) {
      const std::size_t power = base + j;
      if (order > power) continue;
      double falling = 1.0;
      for (std::size_t s = 0; s < order; ++s) falling *= static_cast<double>(power - s);
      d[power - order] = a_[j] * falling;
    }
    return compensated_horner(d, x);
  }

  friend SmoothstepPoly solve_psi_coefficients(std::size_t r);
  friend SmoothstepPoly smoothstep_from_coefficients(std::size_t r, std::vector<double> a);

 private:
  SmoothstepPoly(std::size_t r, std::vector<double> a) : r_(r), a_(std::move(a)) {}

  std::size_t r_;
  std::vector<double> a_;
};

/// psi(x): 0 for x <= 0, 1 for x >= 1, the polynomial in between.
[[nodiscard]] inline double psi_eval(const SmoothstepPoly& p, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // the inner sum alternates in sign and cancels near x = 1
  return compensated_horner(p.coefficients(), x) * std::pow(x, static_cast<double>(p.lowest_power()));
}

/// psi^{(order)}(x) for order in [0, 2r]. Derivatives vanish outside [0,1];
/// on the closed interval the polynomial piece is differentiated exactly.
[[nodiscard]] inline double psi_derivative(const SmoothstepPoly& p, double x, std::size_t order) {
  if (order > 2 * p.order()) {
    throw DomainError("psi_derivative: order " + std::to_string(order) + " exceeds 2r = " + std::to_string(2 * p.order()));
  }
  if (order == 0) return psi_eval(p, x);
  if (x < 0.0 || x > 1.0) return 0.0;
  return p.polynomial_derivative(x, order);
}

namespace detail {

inline void validate_smoothstep(const SmoothstepPoly& p) {
  const std::size_t r = p.order();
  const auto a = p.coefficients();
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (std::abs(p.polynomial_derivative(1.0, 0) - 1.0) > 1e-10 * std::max(1.0, scale)) {
    throw DomainError("smoothstep: psi(1) != 1");
  }
  const linalg::Matrix sys = smoothstep_system(r);
  for (std::size_t m = 1; m <= 2 * r; ++m) {
    double row_scale = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) row_scale += std::abs(sys(m, j) * a[j]);
    if (std::abs(p.polynomial_derivative(1.0, m)) > 1e-9 * row_scale) {
      throw DomainError("smoothstep: derivative " + std::to_string(m) + " does not vanish at 1");
    }
  }
  // Horner on alternating coefficients cancels; allow rounding proportional to sum |a_j|.
  double abs_sum = 0.0;
  for (double v : a) abs_sum += std::abs(v);
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, abs_sum);
  constexpr std::size_t kGrid = 10000;
  for (std::size_t i = 0; i <= kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    const double v = psi_eval(p, x);
    if (v < -slack || v > 1.0 + slack) {
      throw DomainError("smoothstep: psi leaves [0,1] at x = " + std::to_string(x) + " for r = " + std::to_string(r));
    }
  }
}

}  // namespace detail

/// Solves the (2r+1)x(2r+1) boundary system with right-hand side (1,0,...,0).
///
/// Rows are equilibrated before pivoted elimination; the raw rows span many
/// orders of magnitude for larger r. Residuals use the unrounded rows. The result is checked for psi(1) = 1,
/// vanishing derivatives at 1, and 0 <= psi <= 1 on a dense grid.
[[nodiscard]] inline SmoothstepPoly solve_psi_coefficients(std::size_t r) {
  if (r < 1 || r > kMaxSmoothstepOrder) {
    throw DomainError("smoothstep: order must lie in [1," + std::to_string(kMaxSmoothstepOrder) + "]");
  }
  const std::size_t size = 2 * r + 1;
  // Entries are integers below 2^127; each is held as hi + lo in long double.
  __extension__ using Int = __int128;
  std::vector<std::vector<long double>> exact(size, std::vector<long double>(size));
  std::vector<std::vector<long double>> exact_lo(size, std::vector<long double>(size));
  std::vector<long double> row_max(size, 0.0L);
  for (std::size_t m = 0; m < size; ++m) {
    for (std::size_t j = 0; j < size; ++j) {
      Int entry = 1;
      for (std::size_t s = 0; s < m; ++s) entry *= static_cast<Int>(2 * r + 1 + j - s);
      exact[m][j] = static_cast<long double>(entry);
      exact_lo[m][j] = static_cast<long double>(entry - static_cast<Int>(exact[m][j]));
      row_max[m] = std::max(row_max[m], exact[m][j]);
    }
  }
  linalg::Matrix sys(size);
  for (std::size_t m = 0; m < size; ++m) {
    for (std::size_t j = 0; j < size; ++j) sys(m, j) = static_cast<double>(exact[m][j] / row_max[m]);
  }
  const linalg::PivotedLU lu(sys);
  std::vector<double> rhs(size, 0.0);
  rhs[0] = static_cast<double>(1.0L / row_max[0]);
  std::vector<double> x = lu.solve(rhs);
  // Refinement against the exact rows; the rounded equilibrated matrix only preconditions.
  // The residual is a compensated dot product in long double (TwoProduct by fmal).
  for (int pass = 0; pass < 64; ++pass) {  // r = 8 needs a few dozen
    std::vector<double> residual(size);
    for (std::size_t m = 0; m < size; ++m) {
      long double s = m == 0 ? 1.0L : 0.0L;
      long double comp = 0.0L;
      for (std::size_t j = 0; j < size; ++j) {
        const long double prod = -exact[m][j] * x[j];
        const long double prod_err = std::fmal(-exact[m][j], x[j], -prod) - exact_lo[m][j] * x[j];
        const long double t = s + prod;
        const long double bb = t - s;
        comp += ((s - (t - bb)) + (prod - bb)) + prod_err;
        s = t;
      }
      residual[m] = static_cast<double>((s + comp) / row_max[m]);
    }
    const auto dx = lu.solve(residual);
    bool moved = false;
    for (std::size_t j = 0; j < size; ++j) {
      const double next = x[j] + dx[j];
      moved = moved || next != x[j];
      x[j] = next;
    }
    if (!moved) break;
  }
  SmoothstepPoly p(r, std::move(x));
  detail::validate_smoothstep(p);
  return p;
}

/// Wraps externally supplied coefficients, with the same validation as the solver.
[[nodiscard]] inline SmoothstepPoly smoothstep_from_coefficients(std::size_t r, std::vector<double> a) {
  if (r < 1 || a.size() != 2 * r + 1) throw DomainError("smoothstep: need 2r+1 coefficients");
  SmoothstepPoly p(r, std::move(a));
  detail::validate_smoothstep(p);
  return p;
}

}  // namespace wbern
