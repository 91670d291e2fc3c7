// SPDX-License-Identifier: MIT
#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace wbern::testing {

// Reference values written by tests/oracles/golden_oracle.py.
inline const nlohmann::json& oracle() {
  static const nlohmann::json data = [] {
    std::ifstream in(std::string(WBERN_GOLDEN_DIR) + "/oracle.json");
    if (!in) throw std::runtime_error("missing golden/oracle.json");
    return nlohmann::json::parse(in);
  }();
  return data;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace wbern::testing
