// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wbern/basis.hpp"
#include "wbern/compensated_sum.hpp"
#include "wbern/errors.hpp"

namespace wbern {

/// Degree ladder n_i = (i+1) n, i = 0..r-1.
[[nodiscard]] inline std::vector<std::size_t> make_schedule(std::size_t base_n, std::size_t r) {
  if (base_n == 0 || r == 0) throw DomainError("make_schedule: base degree and order must be positive");
  std::vector<std::size_t> nodes(r);
  for (std::size_t i = 0; i < r; ++i) nodes[i] = (i + 1) * base_n;
  return nodes;
}

/// Coefficients C_i with sum C_i = 1 and sum C_i n_i^{-k} = 0 for k = 1..r-1.
///
/// This is the Vandermonde system in y_i = 1/n_i with moment vector (1,0,...,0);
/// its solution is the Lagrange basis at y = 0, C_i = prod_{j != i} n_i / (n_i - n_j).
[[nodiscard]] inline std::vector<double> solve_coefficients(std::span<const std::size_t> nodes) {
  if (nodes.empty()) throw DomainError("solve_coefficients: empty ladder");
  std::vector<double> c(nodes.size(), 1.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == 0) throw DomainError("solve_coefficients: degrees must be positive");
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (j == i) continue;
      if (nodes[i] == nodes[j]) throw SingularSystemError("solve_coefficients: duplicate degree " + std::to_string(nodes[i]));
      const double ni = static_cast<double>(nodes[i]);
      c[i] *= ni / (ni - static_cast<double>(nodes[j]));
    }
  }
  return c;
}

/// sum_i |C_i| for the ladder (i+1) n; independent of n.
[[nodiscard]] inline double ladder_abs_sum(std::size_t r) {
  double total = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    total += std::pow(static_cast<double>(i + 1), static_cast<double>(r - 1)) /
             (std::tgamma(static_cast<double>(i + 1)) * std::tgamma(static_cast<double>(r - i)));
  }
  return total;
}

/// Combination order r with its degree ladder and coefficients.
class CombinationScheme {
 public:
  static constexpr double kResidualTolerance = 1e-10;

  /// Ladder (i+1) base_n with coefficients from solve_coefficients.
  static CombinationScheme make(std::size_t base_n, std::size_t r) {
    auto nodes = make_schedule(base_n, r);
    auto coeffs = solve_coefficients(nodes);
    return CombinationScheme(std::move(nodes), std::move(coeffs));
  }

  CombinationScheme(std::vector<std::size_t> nodes, std::vector<double> coeffs)
      : nodes_(std::move(nodes)), coeffs_(std::move(coeffs)) {
    if (nodes_.empty() || nodes_.size() != coeffs_.size()) {
      throw DomainError("combination scheme: ladder and coefficients must be non-empty and equally long");
    }
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      if (nodes_[i] <= nodes_[i - 1]) throw DomainError("combination scheme: ladder must be strictly increasing");
    }
    if (nodes_.back() > order() * base_n()) {
      throw DomainError("combination scheme: top degree exceeds r * base degree");
    }
    if (std::abs(sum_residual()) > kResidualTolerance) {
      throw DomainError("combination scheme: coefficients do not sum to one");
    }
    for (std::size_t k = 1; k < order(); ++k) {
      if (moment_residual(k) > kResidualTolerance) {
        throw DomainError("combination scheme: inverse-power condition fails at k = " + std::to_string(k));
      }
    }
  }

  [[nodiscard]] std::size_t order() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::size_t base_n() const noexcept { return nodes_.front(); }
  [[nodiscard]] std::span<const std::size_t> nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }

  /// sum_i C_i - 1
  [[nodiscard]] double sum_residual() const {
    CompensatedSum acc(-1.0);
    for (double c : coeffs_) acc += c;
    return acc.value();
  }

  /// |sum_i C_i n_i^{-k}| relative to sum_i |C_i| n_i^{-k}.
  [[nodiscard]] double moment_residual(std::size_t k) const {
    CompensatedSum signed_sum;
    double scale = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double term = coeffs_[i] * std::pow(static_cast<double>(nodes_[i]), -static_cast<double>(k));
      signed_sum += term;
      scale += std::abs(term);
    }
    return scale > 0.0 ? std::abs(signed_sum.value()) / scale : 0.0;
  }

  [[nodiscard]] double abs_sum() const noexcept {
    double s = 0.0;
    for (double c : coeffs_) s += std::abs(c);
    return s;
  }

 private:
  std::vector<std::size_t> nodes_;
  std::vector<double> coeffs_;
};

/// sum_i C_i B_{n_i} from samples already taken at each ladder degree.
[[nodiscard]] inline double combine_samples(const CombinationScheme& scheme, std::span<const SampleVector> samples,
                                            UnitPoint x) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < scheme.order(); ++i) acc += scheme.coeffs()[i] * bernstein_apply(samples[i], x);
  return acc.value();
}

template <RealFunction F>
[[nodiscard]] std::vector<SampleVector> sample_ladder(const F& f, const CombinationScheme& scheme) {
  std::vector<SampleVector> out;
  out.reserve(scheme.order());
  for (std::size_t n : scheme.nodes()) out.push_back(sample_uniform(f, n));
  return out;
}

/// B_{n,r}(f, x) = sum_i C_i B_{n_i}(f, x).
template <RealFunction F>
[[nodiscard]] double combine(const F& f, const CombinationScheme& scheme, UnitPoint x) {
  const auto samples = sample_ladder(f, scheme);
  return combine_samples(scheme, samples, x);
}

/// B_{n,r}((t - x)^power, x), the central moments of the combination.
[[nodiscard]] inline double moment(const CombinationScheme& scheme, std::size_t power, UnitPoint x) {
  const double at = x;
  const double p = static_cast<double>(power);
  return combine([at, p](double t) { return std::pow(t - at, p); }, scheme, x);
}

}  // namespace wbern
