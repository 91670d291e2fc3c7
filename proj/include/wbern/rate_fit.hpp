// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace wbern {

struct RateRow {
  std::size_t n = 0;
  double value = 0.0;

  friend bool operator==(const RateRow&, const RateRow&) = default;
};

/// Per-degree values with a least-squares fit of ln(value) against ln(n).
/// gamma_hat = -2 slope, so that value ~ n^{-gamma/2}.
struct RateReport {
  std::vector<RateRow> rows;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double r_squared = std::numeric_limits<double>::quiet_NaN();
  double gamma_hat = std::numeric_limits<double>::quiet_NaN();

  /// Largest value over all rows.
  [[nodiscard]] double max_value() const noexcept {
    double m = 0.0;
    for (const auto& row : rows) m = std::max(m, row.value);
    return m;
  }
};

/// Ordinary least squares on (ln n, ln value). The slope needs two rows with
/// positive values; r^2 needs three. Otherwise the fields stay NaN.
[[nodiscard]] inline RateReport fit_rate(std::vector<RateRow> rows) {
  RateReport report;
  report.rows = std::move(rows);
  const std::size_t m = report.rows.size();
  if (m < 2) return report;
  for (const auto& row : report.rows) {
    if (!(row.value > 0.0) || !std::isfinite(row.value)) return report;
  }
  double mx = 0.0;
  double my = 0.0;
  for (const auto& row : report.rows) {
    mx += std::log(static_cast<double>(row.n));
    my += std::log(row.value);
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& row : report.rows) {
    const double dx = std::log(static_cast<double>(row.n)) - mx;
    const double dy = std::log(row.value) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) return report;
  report.slope = sxy / sxx;
  report.gamma_hat = -2.0 * report.slope;
  if (m >= 3) report.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return report;
}

}  // namespace wbern
