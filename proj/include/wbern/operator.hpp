// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wbern/basis.hpp"
#include "wbern/blend.hpp"
#include "wbern/combination.hpp"
#include "wbern/compensated_sum.hpp"
#include "wbern/errors.hpp"
#include "wbern/smoothstep.hpp"
#include "wbern/weight.hpp"

namespace wbern {

/// Which degree the blended function is built at for each ladder term.
enum class BlendDegree {
  per_node,  ///< F rebuilt at every n_i with that degree's own patch.
  shared,    ///< F built once at n_0 and sampled by every B_{n_i}.
};

/// The modified combination B_{n,r}(F_n, x) with its ladder, patches and smoothstep.
class ModifiedOperator {
 public:
  static ModifiedOperator make(std::size_t base_n, std::size_t r, const Weight& weight,
                               BlendDegree variant = BlendDegree::per_node) {
    auto scheme = CombinationScheme::make(base_n, r);
    std::vector<BlendSpec> specs;
    specs.reserve(r);
    for (std::size_t n : scheme.nodes()) {
      specs.push_back(BlendSpec::make(variant == BlendDegree::per_node ? n : base_n, r, weight));
    }
    return ModifiedOperator(std::move(scheme), std::move(specs), solve_psi_coefficients(r), variant);
  }

  [[nodiscard]] const CombinationScheme& scheme() const noexcept { return scheme_; }
  [[nodiscard]] std::span<const BlendSpec> specs() const noexcept { return specs_; }
  [[nodiscard]] const SmoothstepPoly& smoothstep() const noexcept { return smoothstep_; }
  [[nodiscard]] BlendDegree variant() const noexcept { return variant_; }
  [[nodiscard]] std::size_t order() const noexcept { return scheme_.order(); }
  [[nodiscard]] const Weight& weight() const noexcept { return specs_.front().weight(); }

 private:
  ModifiedOperator(CombinationScheme scheme, std::vector<BlendSpec> specs, SmoothstepPoly smoothstep,
                   BlendDegree variant)
      : scheme_(std::move(scheme)), specs_(std::move(specs)), smoothstep_(std::move(smoothstep)), variant_(variant) {
    for (const auto& s : specs_) {
      if (s.order() != scheme_.order() || !(s.weight() == specs_.front().weight())) {
        throw DomainError("modified operator: patches must share order and weight");
      }
    }
  }

  CombinationScheme scheme_;
  std::vector<BlendSpec> specs_;
  SmoothstepPoly smoothstep_;
  BlendDegree variant_;
};

/// F_n sampled at k/n_i for every ladder degree n_i.
template <RealFunction F>
[[nodiscard]] std::vector<SampleVector> sample_modified(const ModifiedOperator& op, const F& f) {
  std::vector<SampleVector> out;
  out.reserve(op.order());
  for (std::size_t i = 0; i < op.order(); ++i) {
    const BlendedFunction<F> blended(f, op.specs()[i], op.smoothstep());
    out.push_back(sample_uniform(blended, op.scheme().nodes()[i]));
  }
  return out;
}

/// B_{n,r}(F_n, x).
template <RealFunction F>
[[nodiscard]] double modified_operator(const ModifiedOperator& op, const F& f, UnitPoint x) {
  return combine_samples(op.scheme(), sample_modified(op, f), x);
}

/// log(n! / (n - m)!), summed term by term.
[[nodiscard]] inline double log_falling_factorial(std::size_t n, std::size_t m) {
  if (m > n) throw DomainError("falling factorial: m exceeds n");
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) s += std::log(static_cast<double>(n - j));
  return s;
}

/// Forward differences of order `order` with unit index step: D_k = sum_j (-1)^j C(order,j) v[k+order-j].
[[nodiscard]] inline std::vector<double> forward_differences(std::span<const double> values, std::size_t order) {
  if (values.size() <= order) throw DomainError("forward_differences: too few samples");
  std::vector<double> out(values.size() - order);
  for (std::size_t k = 0; k < out.size(); ++k) {
    CompensatedSum acc;
    for (std::size_t j = 0; j <= order; ++j) {
      const double term = binomial_coefficient(order, j) * values[k + order - j];
      acc += (j % 2 == 0) ? term : -term;
    }
    out[k] = acc.value();
  }
  return out;
}

/// 2r-th derivative of sum_i C_i B_{n_i}(g) from samples of g:
/// sum_i C_i n_i!/(n_i-2r)! sum_k Delta^{2r}_{1/n_i} g(k/n_i) p_{n_i-2r,k}(x).
[[nodiscard]] inline double combination_derivative_2r(const CombinationScheme& scheme,
                                                      std::span<const SampleVector> samples, UnitPoint x) {
  const std::size_t order = 2 * scheme.order();
  CompensatedSum total;
  for (std::size_t i = 0; i < scheme.order(); ++i) {
    const std::size_t n = scheme.nodes()[i];
    if (n <= order) {
      throw DomainError("operator_derivative_2r: degree " + std::to_string(n) + " must exceed 2r = " + std::to_string(order));
    }
    const auto diffs = forward_differences(samples[i].values(), order);
    const std::size_t m = n - order;
    CompensatedSum inner;
    for (std::size_t k = 0; k <= m; ++k) {
      const double p = bernstein_basis(m, k, x);
      if (p != 0.0) inner += diffs[k] * p;
    }
    total += scheme.coeffs()[i] * std::exp(log_falling_factorial(n, order)) * inner.value();
  }
  return total.value();
}

/// d^{2r}/dx^{2r} of B_{n,r}(F_n, x).
template <RealFunction F>
[[nodiscard]] double operator_derivative_2r(const ModifiedOperator& op, const F& f, UnitPoint x) {
  return combination_derivative_2r(op.scheme(), sample_modified(op, f), x);
}

}  // namespace wbern
