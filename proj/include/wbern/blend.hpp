// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wbern/basis.hpp"
#include "wbern/errors.hpp"
#include "wbern/smoothstep.hpp"
#include "wbern/weight.hpp"

namespace wbern {

namespace detail {

// floor(v) with v snapped to the nearest integer when it lies within rounding noise of it,
// so products such as 100 * 0.29 floor to 29 and not 28.
[[nodiscard]] inline double snapped_floor(double v) noexcept {
  const double nearest = std::round(v);
  if (std::abs(v - nearest) <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(v))) {
    return nearest;
  }
  return std::floor(v);
}

[[nodiscard]] inline double node_offset(std::size_t r, std::size_t i) noexcept {
  return 0.5 * (static_cast<double>(r) - 1.0) + static_cast<double>(i);
}

[[nodiscard]] inline bool breakpoints_admissible(std::size_t n, double xi) noexcept {
  const double nd = static_cast<double>(n);
  const double root = std::sqrt(nd);
  return root >= 2.0 && nd * xi - 2.0 * root >= 1.0 && nd * (1.0 - xi) - 2.0 * root >= 1.0;
}

[[nodiscard]] inline bool nodes_admissible(std::size_t n, std::size_t r, double xi) noexcept {
  const double nd = static_cast<double>(n);
  return snapped_floor(nd * xi - node_offset(r, r + 1)) >= 1.0 && snapped_floor(nd * xi - node_offset(r, 1)) < nd;
}

}  // namespace detail

/// Smallest degree n for which both the breakpoints and the interpolation nodes fit in (0,1).
/// Every larger degree is admissible as well.
[[nodiscard]] inline std::size_t min_admissible_degree(std::size_t r, const Weight& weight) {
  std::size_t n = 4;
  while (!(detail::breakpoints_admissible(n, weight.xi()) && detail::nodes_admissible(n, r, weight.xi()))) ++n;
  return n;
}

/// x_i = floor(n xi - ((r-1)/2 + i)) / n for i = 1..r+1, strictly decreasing.
[[nodiscard]] inline std::vector<double> interpolation_nodes(std::size_t n, std::size_t r, const Weight& weight) {
  if (r == 0) throw DomainError("interpolation_nodes: order must be positive");
  if (!detail::nodes_admissible(n, r, weight.xi())) {
    const std::size_t min_n = min_admissible_degree(r, weight);
    throw MinNTooSmall(n, min_n,
                       "interpolation nodes leave (0,1) at n = " + std::to_string(n) + "; minimal admissible n is " +
                           std::to_string(min_n));
  }
  const double nd = static_cast<double>(n);
  std::vector<double> nodes(r + 1);
  for (std::size_t i = 1; i <= r + 1; ++i) nodes[i - 1] = detail::snapped_floor(nd * weight.xi() - detail::node_offset(r, i)) / nd;
  return nodes;
}

/// x'_1..x'_4 = floor(n xi - 2 sqrt n)/n, floor(n xi - sqrt n)/n, floor(n xi + sqrt n)/n, floor(n xi + 2 sqrt n)/n.
[[nodiscard]] inline std::array<double, 4> breakpoints(std::size_t n, const Weight& weight) {
  if (!detail::breakpoints_admissible(n, weight.xi())) {
    std::size_t min_n = 4;
    while (!detail::breakpoints_admissible(min_n, weight.xi())) ++min_n;
    throw MinNTooSmall(n, min_n,
                       "blend window does not fit in (0,1) at n = " + std::to_string(n) + "; minimal admissible n is " +
                           std::to_string(min_n));
  }
  const double nd = static_cast<double>(n);
  const double root = std::sqrt(nd);
  const double c = nd * weight.xi();
  return {detail::snapped_floor(c - 2.0 * root) / nd, detail::snapped_floor(c - root) / nd,
          detail::snapped_floor(c + root) / nd, detail::snapped_floor(c + 2.0 * root) / nd};
}

/// Lagrange interpolation on a fixed node set, evaluated in the first barycentric form.
class LagrangePatch {
 public:
  explicit LagrangePatch(std::vector<double> nodes) : nodes_(std::move(nodes)), weights_(nodes_.size(), 1.0) {
    if (nodes_.empty()) throw SingularSystemError("lagrange: no nodes");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      for (std::size_t j = 0; j < nodes_.size(); ++j) {
        if (i == j) continue;
        const double d = nodes_[i] - nodes_[j];
        if (d == 0.0) throw SingularSystemError("lagrange: duplicate node " + std::to_string(nodes_[i]));
        weights_[i] /= d;
      }
    }
  }

  [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::span<const double> barycentric_weights() const noexcept { return weights_; }

  /// sum_i values[i] l_i(x)
  [[nodiscard]] double evaluate(std::span<const double> values, double x) const {
    double node_poly = 1.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (x == nodes_[i]) return values[i];
      node_poly *= x - nodes_[i];
    }
    CompensatedSum acc;
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] / (x - nodes_[i]) * values[i];
    return node_poly * acc.value();
  }

  /// l_i(x)
  [[nodiscard]] double basis(std::size_t i, double x) const {
    std::vector<double> e(nodes_.size(), 0.0);
    e[i] = 1.0;
    return evaluate(e, x);
  }

  /// f(x_i) for every node, each required to be finite.
  template <RealFunction F>
  [[nodiscard]] std::vector<double> sample(const F& f) const {
    std::vector<double> v(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      v[i] = static_cast<double>(f(nodes_[i]));
      if (!std::isfinite(v[i])) {
        throw SampleError(nodes_[i], "non-finite value at interpolation node " + std::to_string(nodes_[i]));
      }
    }
    return v;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// H(f, x) = sum_i f(x_i) l_i(x).
template <RealFunction F>
[[nodiscard]] double lagrange_interpolant(const F& f, std::span<const double> nodes, double x) {
  const LagrangePatch patch(std::vector<double>(nodes.begin(), nodes.end()));
  return patch.evaluate(patch.sample(f), x);
}

/// Geometry of the singularity patch at one degree n.
class BlendSpec {
 public:
  static BlendSpec make(std::size_t n, std::size_t r, const Weight& weight) {
    if (!(detail::breakpoints_admissible(n, weight.xi()) && detail::nodes_admissible(n, r, weight.xi()))) {
      const std::size_t min_n = min_admissible_degree(r, weight);
      throw MinNTooSmall(n, min_n,
                         "singularity patch does not fit at n = " + std::to_string(n) + " (xi = " +
                             std::to_string(weight.xi()) + ", r = " + std::to_string(r) +
                             "); minimal admissible n is " + std::to_string(min_n));
    }
    return BlendSpec(n, r, weight, interpolation_nodes(n, r, weight), wbern::breakpoints(n, weight));
  }

  [[nodiscard]] std::size_t degree() const noexcept { return n_; }
  [[nodiscard]] std::size_t order() const noexcept { return r_; }
  [[nodiscard]] const Weight& weight() const noexcept { return weight_; }
  [[nodiscard]] std::span<const double> nodes() const noexcept { return patch_.nodes(); }
  [[nodiscard]] const std::array<double, 4>& breakpoints() const noexcept { return breaks_; }
  [[nodiscard]] const LagrangePatch& patch() const noexcept { return patch_; }

  /// Largest |l_i(x)| over the blend window [x'_1, x'_4], sampled on `samples` points.
  [[nodiscard]] double max_basis_magnitude(std::size_t samples = 1001) const {
    double worst = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      const double x = breaks_[0] + (breaks_[3] - breaks_[0]) * static_cast<double>(s) / static_cast<double>(samples - 1);
      for (std::size_t i = 0; i < nodes().size(); ++i) worst = std::max(worst, std::abs(patch_.basis(i, x)));
    }
    return worst;
  }

 private:
  BlendSpec(std::size_t n, std::size_t r, Weight weight, std::vector<double> nodes, std::array<double, 4> breaks)
      : n_(n), r_(r), weight_(weight), patch_(std::move(nodes)), breaks_(breaks) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(breaks_[i] < breaks_[i + 1])) throw DomainError("blend: breakpoints are not strictly increasing");
    }
    if (!(breaks_[0] >= 0.0 && breaks_[3] <= 1.0)) throw DomainError("blend: breakpoints leave [0,1]");
    const double reach = (1.5 * static_cast<double>(r) + 1.5) / static_cast<double>(n);
    for (double x : patch_.nodes()) {
      if (!(x > 0.0 && x < 1.0) || std::abs(x - weight.xi()) > reach) {
        throw DomainError("blend: interpolation node " + std::to_string(x) + " is not near the singularity");
      }
    }
  }

  std::size_t n_;
  std::size_t r_;
  Weight weight_;
  LagrangePatch patch_;
  std::array<double, 4> breaks_;
};

/// The blended function F_n(f, .): f away from the singularity, the patch H near it,
/// joined by smoothstep transitions. f is never evaluated inside (x'_2, x'_3)
/// except at the interpolation nodes.
template <RealFunction F>
class BlendedFunction {
 public:
  BlendedFunction(const F& f, const BlendSpec& spec, const SmoothstepPoly& smoothstep)
      : f_(&f), spec_(&spec), smoothstep_(&smoothstep), node_values_(spec.patch().sample(f)) {}

  [[nodiscard]] double operator()(double x) const {
    const auto& b = spec_->breakpoints();
    if (x <= b[0] || x >= b[3]) return static_cast<double>((*f_)(x));
    const double h = spec_->patch().evaluate(node_values_, x);
    if (x >= b[1] && x <= b[2]) return h;
    const double psi1 = psi_eval(*smoothstep_, (x - b[0]) / (b[1] - b[0]));
    const double psi2 = psi_eval(*smoothstep_, (x - b[2]) / (b[3] - b[2]));
    const double fx = static_cast<double>((*f_)(x));
    return fx * (1.0 - psi1 + psi2) + psi1 * (1.0 - psi2) * h;
  }

  /// The interpolant H alone.
  [[nodiscard]] double patch_value(double x) const { return spec_->patch().evaluate(node_values_, x); }

 private:
  const F* f_;
  const BlendSpec* spec_;
  const SmoothstepPoly* smoothstep_;
  std::vector<double> node_values_;
};

/// F_n(f, x) at a single point.
template <RealFunction F>
[[nodiscard]] double blend_eval(const F& f, const BlendSpec& spec, const SmoothstepPoly& smoothstep, UnitPoint x) {
  return BlendedFunction<F>(f, spec, smoothstep)(x);
}

}  // namespace wbern
