// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <string>

#include "wbern/errors.hpp"

namespace wbern {

/// Singularity weight |x - xi|^alpha with 0 < xi < 1 and alpha > 0.
class Weight {
 public:
  Weight(double xi, double alpha) : xi_(xi), alpha_(alpha) {
    if (!(xi > 0.0 && xi < 1.0)) {
      throw DomainError("weight: singularity location must lie in (0,1), got " + std::to_string(xi));
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw DomainError("weight: exponent must be positive, got " + std::to_string(alpha));
    }
  }

  [[nodiscard]] double xi() const noexcept { return xi_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }

  [[nodiscard]] double operator()(double x) const noexcept { return std::pow(std::abs(x - xi_), alpha_); }

  friend bool operator==(const Weight&, const Weight&) = default;

 private:
  double xi_;
  double alpha_;
};

/// phi(x) = sqrt(x (1 - x)), the Ditzian-Totik step weight. Zero outside [0,1].
[[nodiscard]] inline double step_weight(double x) noexcept {
  const double v = x * (1.0 - x);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

}  // namespace wbern
