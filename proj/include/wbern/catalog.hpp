// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wbern/basis.hpp"
#include "wbern/errors.hpp"
#include "wbern/smoothness.hpp"
#include "wbern/weight.hpp"

namespace wbern {

enum class FunctionKind { smooth_sin, smooth_poly, singular_power, singular_osc };

/// A catalog entry: kind plus its parameters.
///
/// Keys look like "smooth_sin", "smooth_sin:freq=2", "smooth_poly:c0=1,c2=-3",
/// "singular_power:beta=0.5" or "singular_osc:beta=0.3,omega=1".
struct FunctionSpec {
  FunctionKind kind = FunctionKind::smooth_sin;
  double freq = 1.0;                 // smooth_sin: sin(freq pi x)
  std::vector<double> coeffs{0, 1};  // smooth_poly: sum c_j x^j
  double beta = 0.5;                 // singular kinds: |x - xi|^{-beta}
  double omega = 0.0;                // singular_osc: phase of sin(1/|x - xi| + omega)

  [[nodiscard]] bool singular() const noexcept {
    return kind == FunctionKind::singular_power || kind == FunctionKind::singular_osc;
  }

  [[nodiscard]] static FunctionSpec parse(std::string_view key);
  [[nodiscard]] std::string key() const;
};

namespace detail {

[[nodiscard]] inline double parse_real(std::string_view text, std::string_view context) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw ConfigError("function key: cannot parse number '" + s + "' in " + std::string(context));
  }
  return v;
}

[[nodiscard]] inline std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

inline FunctionSpec FunctionSpec::parse(std::string_view key) {
  const auto colon = key.find(':');
  const std::string_view name = key.substr(0, colon);
  FunctionSpec spec;
  if (name == "smooth_sin") {
    spec.kind = FunctionKind::smooth_sin;
  } else if (name == "smooth_poly") {
    spec.kind = FunctionKind::smooth_poly;
  } else if (name == "singular_power") {
    spec.kind = FunctionKind::singular_power;
  } else if (name == "singular_osc") {
    spec.kind = FunctionKind::singular_osc;
  } else {
    throw ConfigError("unknown function kind '" + std::string(name) + "'");
  }
  std::map<std::size_t, double> poly;
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : key.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("function key: expected name=value, got '" + std::string(item) + "'");
    const std::string_view param = item.substr(0, eq);
    const double value = detail::parse_real(item.substr(eq + 1), key);
    if (spec.kind == FunctionKind::smooth_sin && param == "freq") {
      spec.freq = value;
    } else if (spec.kind == FunctionKind::smooth_poly && param.size() > 1 && param[0] == 'c') {
      std::size_t power = 0;
      const auto* first = param.data() + 1;
      const auto* last = param.data() + param.size();
      const auto [ptr, ec] = std::from_chars(first, last, power);
      if (ec != std::errc{} || ptr != last || power > 32) {
        throw ConfigError("function key: bad polynomial coefficient name '" + std::string(param) + "'");
      }
      poly[power] = value;
    } else if (spec.singular() && param == "beta") {
      spec.beta = value;
    } else if (spec.kind == FunctionKind::singular_osc && param == "omega") {
      spec.omega = value;
    } else {
      throw ConfigError("function key: parameter '" + std::string(param) + "' does not apply to " + std::string(name));
    }
  }
  if (spec.kind == FunctionKind::smooth_poly && !poly.empty()) {
    spec.coeffs.assign(poly.rbegin()->first + 1, 0.0);
    for (const auto& [power, c] : poly) spec.coeffs[power] = c;
  }
  return spec;
}

inline std::string FunctionSpec::key() const {
  switch (kind) {
    case FunctionKind::smooth_sin:
      return "smooth_sin:freq=" + detail::format_real(freq);
    case FunctionKind::smooth_poly: {
      std::string s = "smooth_poly:";
      for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (j > 0) s += ',';
        s += "c" + std::to_string(j) + "=" + detail::format_real(coeffs[j]);
      }
      return s;
    }
    case FunctionKind::singular_power:
      return "singular_power:beta=" + detail::format_real(beta);
    case FunctionKind::singular_osc:
      return "singular_osc:beta=" + detail::format_real(beta) + ",omega=" + detail::format_real(omega);
  }
  return {};
}

/// Evaluation rule of a catalog entry on [0,1] minus the singularity.
class CatalogFunction {
 public:
  static constexpr double kSingularExclusion = 1e-12;

  CatalogFunction(FunctionSpec spec, double xi) : spec_(std::move(spec)), xi_(xi) {}

  [[nodiscard]] double operator()(double x) const {
    switch (spec_.kind) {
      case FunctionKind::smooth_sin:
        return std::sin(spec_.freq * std::numbers::pi * x);
      case FunctionKind::smooth_poly: {
        double s = 0.0;
        for (std::size_t j = spec_.coeffs.size(); j-- > 0;) s = s * x + spec_.coeffs[j];
        return s;
      }
      case FunctionKind::singular_power:
        return std::pow(distance(x), -spec_.beta);
      case FunctionKind::singular_osc: {
        const double d = distance(x);
        return std::pow(d, -spec_.beta) * std::sin(1.0 / d + spec_.omega);
      }
    }
    return 0.0;
  }

  [[nodiscard]] const FunctionSpec& spec() const noexcept { return spec_; }

 private:
  [[nodiscard]] double distance(double x) const {
    const double d = std::abs(x - xi_);
    if (d <= kSingularExclusion) throw SampleError(x, "catalog function sampled at its singularity x = " + std::to_string(x));
    return d;
  }

  FunctionSpec spec_;
  double xi_;
};

/// Builds the evaluation rule, checking that a singular entry belongs to the weighted class
/// (0 < beta < alpha, so that |x - xi|^alpha f(x) -> 0).
[[nodiscard]] inline CatalogFunction make_function(const FunctionSpec& spec, const Weight& weight) {
  if (spec.singular() && !(spec.beta > 0.0 && spec.beta < weight.alpha())) {
    throw ClassMembershipError("catalog: singular exponent beta = " + detail::format_real(spec.beta) +
                               " must lie in (0, alpha = " + detail::format_real(weight.alpha()) + ")");
  }
  if (spec.kind == FunctionKind::smooth_poly && spec.coeffs.empty()) {
    throw ConfigError("catalog: polynomial needs at least one coefficient");
  }
  return CatalogFunction(spec, weight.xi());
}

/// Numerical check that |x - xi|^alpha f(x) -> 0 at the singularity: the max over
/// grid points within 1e-2, 1e-4 and 1e-6 of xi must at least halve from shell to shell.
template <RealFunction F>
[[nodiscard]] bool membership_check(const F& f, const Weight& weight, const EvaluationGrid& grid) {
  constexpr std::array<double, 3> radii{1e-2, 1e-4, 1e-6};
  std::array<double, 3> shell_max{};
  for (std::size_t s = 0; s < radii.size(); ++s) {
    bool any = false;
    for (double x : grid.points()) {
      const double d = std::abs(x - weight.xi());
      if (d > radii[s]) continue;
      any = true;
      const double v = weight(x) * std::abs(static_cast<double>(f(x)));
      if (!std::isfinite(v)) return false;
      shell_max[s] = std::max(shell_max[s], v);
    }
    if (!any) return false;
  }
  return shell_max[1] < 0.5 * shell_max[0] && shell_max[2] < 0.5 * shell_max[1];
}

/// Membership of a catalog entry, evaluated without the construction-time class check.
[[nodiscard]] inline bool membership_check(const FunctionSpec& spec, const Weight& weight, const EvaluationGrid& grid) {
  return membership_check(CatalogFunction(spec, weight.xi()), weight, grid);
}

}  // namespace wbern
