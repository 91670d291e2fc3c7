// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wbern/basis.hpp"
#include "wbern/errors.hpp"
#include "wbern/weight.hpp"

namespace wbern {

/// Sorted evaluation points on [0,1] that discretize sup norms. Clustered
/// geometrically toward the singularity and toward both endpoints; the
/// singularity itself is never a grid point.
class EvaluationGrid {
 public:
  static constexpr double kClusterRadius = 0.05;
  static constexpr double kClusterInnerRadius = 1e-7;
  static constexpr double kEndpointRadius = 0.01;
  static constexpr double kEndpointInnerRadius = 1e-8;
  static constexpr double kCenterExclusion = 1e-12;

  /// About `size` points: a uniform backbone, size/8 + 1 points on each side of
  /// the center within kClusterRadius, and size/40 points at each endpoint.
  static EvaluationGrid make(std::size_t size, double center) {
    if (size < 16) throw DomainError("evaluation grid: need at least 16 points");
    if (!(center > 0.0 && center < 1.0)) throw DomainError("evaluation grid: center must lie in (0,1)");
    const std::size_t cluster = (size + 7) / 8 + 1;
    const std::size_t endpoint = size / 40;
    const std::size_t backbone = size - 2 * cluster - 2 * endpoint;
    std::vector<double> pts;
    pts.reserve(size + 2);
    for (std::size_t i = 0; i < backbone; ++i) pts.push_back(static_cast<double>(i) / static_cast<double>(backbone - 1));
    append_geometric(pts, cluster, kClusterRadius, kClusterInnerRadius, [&](double d) {
      return std::array<double, 2>{center - d, center + d};
    });
    append_geometric(pts, endpoint, kEndpointRadius, kEndpointInnerRadius, [](double d) {
      return std::array<double, 2>{d, 1.0 - d};
    });
    std::erase_if(pts, [&](double x) { return x < 0.0 || x > 1.0 || std::abs(x - center) <= kCenterExclusion; });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return b - a <= 1e-15; }), pts.end());
    return EvaluationGrid(std::move(pts), center);
  }

  /// Points of this grid inside [lo, hi].
  [[nodiscard]] EvaluationGrid restricted(double lo, double hi) const {
    std::vector<double> pts;
    for (double x : points_) {
      if (x >= lo && x <= hi) pts.push_back(x);
    }
    return EvaluationGrid(std::move(pts), center_, false);
  }

  [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] double cluster_center() const noexcept { return center_; }

 private:
  EvaluationGrid(std::vector<double> pts, double center, bool full = true) : points_(std::move(pts)), center_(center) {
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (!(points_[i] > points_[i - 1])) throw DomainError("evaluation grid: points must be strictly increasing");
    }
    if (full && (points_.empty() || points_.front() != 0.0 || points_.back() != 1.0)) {
      throw DomainError("evaluation grid: endpoints 0 and 1 must be included");
    }
  }

  template <typename Place>
  static void append_geometric(std::vector<double>& pts, std::size_t count, double outer, double inner, Place place) {
    const double ratio = std::pow(inner / outer, 1.0 / static_cast<double>(count - 1));
    double d = outer;
    for (std::size_t m = 0; m < count; ++m, d *= ratio) {
      for (double x : place(d)) pts.push_back(x);
    }
  }

  std::vector<double> points_;
  double center_;
};

/// max over the grid of |x - xi|^alpha |g(x)|.
template <RealFunction G>
[[nodiscard]] double weighted_norm(const G& g, const Weight& weight, const EvaluationGrid& grid) {
  double best = 0.0;
  for (double x : grid.points()) {
    const double v = weight(x) * std::abs(static_cast<double>(g(x)));
    if (!std::isfinite(v)) throw EvaluationError(x, "weighted value is not finite at x = " + std::to_string(x));
    best = std::max(best, v);
  }
  return best;
}

/// Same as weighted_norm for values already tabulated on the grid.
[[nodiscard]] inline double weighted_norm_of_values(std::span<const double> values, const Weight& weight,
                                                    const EvaluationGrid& grid) {
  if (values.size() != grid.size()) throw DomainError("weighted_norm: value count does not match grid");
  double best = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = grid.points()[i];
    const double v = weight(x) * std::abs(values[i]);
    if (!std::isfinite(v)) throw EvaluationError(x, "weighted value is not finite at x = " + std::to_string(x));
    best = std::max(best, v);
  }
  return best;
}

/// Difference order, modulus argument t, and h samples per octave.
///
/// The step sizes are the lattice h = 2^{-3} 2^{-m/h_count}, m = 0, 1, ..., restricted to
/// kMinStep <= h <= t. The lattice is shared by all t, so the sampled sup is
/// nondecreasing in t and dyadic t are hit exactly.
struct ModulusParams {
  static constexpr double kMaxT = 0.125;
  static constexpr double kMinStep = 0x1p-20;

  std::size_t r2 = 2;
  double t = 0.125;
  std::size_t h_count = 8;

  void validate() const {
    if (r2 == 0 || r2 % 2 != 0) throw DomainError("modulus: difference order must be a positive even integer");
    if (!(t > 0.0 && t <= kMaxT)) throw DomainError("modulus: t must lie in (0, 1/8], got " + std::to_string(t));
    if (h_count < 8) throw DomainError("modulus: need at least 8 step samples per octave");
  }

  [[nodiscard]] std::vector<double> steps() const {
    validate();
    std::vector<double> hs;
    for (std::size_t m = 0;; ++m) {
      const double h = kMaxT * std::exp2(-static_cast<double>(m) / static_cast<double>(h_count));
      if (h < kMinStep) break;
      if (h <= t * (1.0 + 1e-12)) hs.push_back(h);
    }
    return hs;
  }
};

/// Weighted terms of the modulus at one step size h.
struct ModulusTerms {
  double interior = 0.0;  ///< symmetric difference with step h phi(x) on [16h^2, 1-16h^2]
  double left = 0.0;      ///< forward difference with step h on [0, 16h^2]
  double right = 0.0;     ///< backward difference with step h on [1-16h^2, 1]

  [[nodiscard]] double total() const noexcept { return interior + left + right; }
};

template <RealFunction F>
[[nodiscard]] ModulusTerms modulus_terms(const F& f, const Weight& weight, std::size_t r2, double h,
                                         const EvaluationGrid& grid) {
  ModulusTerms terms;
  const double edge = 16.0 * h * h;
  const double reach = static_cast<double>(r2) * h;
  auto record = [&](double& slot, double x, double diff) {
    const double v = weight(x) * std::abs(diff);
    if (!std::isfinite(v)) throw EvaluationError(x, "weighted difference is not finite at x = " + std::to_string(x));
    slot = std::max(slot, v);
  };
  for (double x : grid.points()) {
    if (x >= edge && x <= 1.0 - edge && symmetric_difference_admissible(x, h, r2)) {
      record(terms.interior, x, symmetric_difference(f, x, h, r2));
    }
    if (x <= edge && x + reach <= 1.0) record(terms.left, x, forward_difference(f, x, h, r2));
    if (x >= 1.0 - edge && x - reach >= 0.0) record(terms.right, x, backward_difference(f, x, h, r2));
  }
  return terms;
}

/// omega^{r2}_phi(f, t)_w: sup over sampled h in (0, t] of the three weighted difference norms.
/// Grid points whose difference stencil leaves [0,1] are skipped.
template <RealFunction F>
[[nodiscard]] double weighted_modulus(const F& f, const Weight& weight, const ModulusParams& params,
                                      const EvaluationGrid& grid) {
  double best = 0.0;
  for (double h : params.steps()) best = std::max(best, modulus_terms(f, weight, params.r2, h, grid).total());
  return best;
}

}  // namespace wbern
