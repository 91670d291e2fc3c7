// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "wbern/errors.hpp"
#include "wbern/rate_fit.hpp"

namespace wbern {

enum class ReportFormat { csv, json };

[[nodiscard]] inline ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw ConfigError("unknown report format '" + std::string(name) + "' (expected csv or json)");
}

namespace detail {

[[nodiscard]] inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[nodiscard]] inline nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

[[nodiscard]] inline double from_json_number(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace detail

/// CSV with header n,value,slope,r_squared,gamma_hat and CRLF line endings.
/// The fit fields repeat on every row.
[[nodiscard]] inline std::string report_to_csv(const RateReport& report) {
  std::string out = "n,value,slope,r_squared,gamma_hat\r\n";
  const std::string fit = detail::csv_number(report.slope) + "," + detail::csv_number(report.r_squared) + "," +
                          detail::csv_number(report.gamma_hat);
  for (const auto& row : report.rows) {
    out += std::to_string(row.n) + "," + detail::csv_number(row.value) + "," + fit + "\r\n";
  }
  return out;
}

/// {"rows":[{"n":..,"value":..},...],"slope":..,"r_squared":..,"gamma_hat":..}; NaN becomes null.
[[nodiscard]] inline nlohmann::json report_to_json(const RateReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) rows.push_back({{"n", row.n}, {"value", detail::json_number(row.value)}});
  return {{"rows", rows},
          {"slope", detail::json_number(report.slope)},
          {"r_squared", detail::json_number(report.r_squared)},
          {"gamma_hat", detail::json_number(report.gamma_hat)}};
}

[[nodiscard]] inline RateReport report_from_json(const nlohmann::json& j) {
  RateReport report;
  for (const auto& row : j.at("rows")) {
    report.rows.push_back({row.at("n").get<std::size_t>(), detail::from_json_number(row.at("value"))});
  }
  report.slope = detail::from_json_number(j.at("slope"));
  report.r_squared = detail::from_json_number(j.at("r_squared"));
  report.gamma_hat = detail::from_json_number(j.at("gamma_hat"));
  return report;
}

[[nodiscard]] inline std::string format_report(const RateReport& report, ReportFormat format) {
  if (format == ReportFormat::csv) return report_to_csv(report);
  return report_to_json(report).dump(2) + "\n";
}

/// Writes the report to `path` in binary mode, so the bytes are identical on every platform.
inline void emit_report(const RateReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open report file '" + path + "' for writing");
  const std::string text = format_report(report, format);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing report file '" + path + "'");
}

}  // namespace wbern
