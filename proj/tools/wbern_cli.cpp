// SPDX-License-Identifier: MIT
// Command-line runner for the weighted Bernstein combination experiments.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wbern/wbern.hpp"

namespace {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kIoFailure = 1, kBadConfig = 2, kNumerical = 3 };

struct Options {
  std::size_t r = 2;
  std::size_t n = 64;
  std::vector<std::size_t> n_list{32, 64, 128, 256, 512, 1024};
  double xi = 0.513;
  double alpha = 1.0;
  std::string function = "smooth_sin";
  std::size_t grid = 2001;
  std::string out;
  std::string format = "csv";
  std::string variant = "per_node";
  std::size_t threads = 1;
  std::size_t h_count = 8;
  double lambda = 0.0;
  double t = 0.125;
  double u = 1.0;
  double v = 0.0;
  double beta = 1.0;
  int lemma = 1;
};

std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw wbern::ConfigError("--n-list: '" + item + "' is not a positive integer");
    }
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw wbern::ConfigError("--n-list: empty list");
  return out;
}

// One settable field: its flag name, the JSON key, and how to copy it out of a parsed file.
struct Field {
  const char* flag;
  const char* key;
  std::function<void(Options&, const json&)> from_json;
  std::function<void(Options&, const Options&)> copy;
};

template <typename T>
Field field(const char* flag, const char* key, T Options::*member) {
  return {flag, key, [member](Options& o, const json& j) { o.*member = j.get<T>(); },
          [member](Options& o, const Options& src) { o.*member = src.*member; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = {
      field("--r", "r", &Options::r),
      field("--n", "n", &Options::n),
      field("--n-list", "n_list", &Options::n_list),
      field("--xi", "xi", &Options::xi),
      field("--alpha", "alpha", &Options::alpha),
      field("--function", "function", &Options::function),
      field("--grid", "grid", &Options::grid),
      field("--out", "out", &Options::out),
      field("--format", "format", &Options::format),
      field("--variant", "variant", &Options::variant),
      field("--threads", "threads", &Options::threads),
      field("--h-count", "h_count", &Options::h_count),
      field("--lambda", "lambda", &Options::lambda),
      field("--t", "t", &Options::t),
      field("--u", "u", &Options::u),
      field("--v", "v", &Options::v),
      field("--beta", "beta", &Options::beta),
  };
  return all;
}

Options load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wbern::ConfigError("cannot read config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw wbern::ConfigError("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw wbern::ConfigError("config file '" + path + "' must hold a JSON object");
  Options o;
  for (const auto& [key, value] : j.items()) {
    const auto& all = fields();
    auto it = std::find_if(all.begin(), all.end(), [&](const Field& f) { return key == f.key; });
    if (it == all.end()) throw wbern::ConfigError("config file: unknown key '" + key + "'");
    try {
      it->from_json(o, value);
    } catch (const json::exception& e) {
      throw wbern::ConfigError("config file: bad value for '" + key + "': " + e.what());
    }
  }
  return o;
}

wbern::SweepConfig sweep_of(const Options& o) {
  wbern::SweepConfig c;
  c.r = o.r;
  c.weight = wbern::Weight(o.xi, o.alpha);
  c.function_key = o.function;
  c.n_list = o.n_list;
  c.grid_size = o.grid;
  if (o.variant == "per_node") {
    c.variant = wbern::BlendDegree::per_node;
  } else if (o.variant == "shared") {
    c.variant = wbern::BlendDegree::shared;
  } else {
    throw wbern::ConfigError("--variant must be per_node or shared");
  }
  c.threads = o.threads;
  c.h_count = o.h_count;
  return c;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw wbern::IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw wbern::IoError("failed writing '" + path + "'");
}

void check_finite(const wbern::RateReport& report) {
  for (const auto& row : report.rows) {
    if (!std::isfinite(row.value)) {
      throw wbern::EvaluationError(static_cast<double>(row.n), "non-finite value at n = " + std::to_string(row.n));
    }
  }
}

void emit(const wbern::RateReport& report, const Options& o) {
  check_finite(report);
  write_text(wbern::format_report(report, wbern::parse_report_format(o.format)), o.out);
}

// "a/b.csv" -> "a/b.plain.csv"
std::string plain_path(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ".plain";
  return path.substr(0, dot) + ".plain" + path.substr(dot);
}

std::string table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
                  wbern::ReportFormat format) {
  if (format == wbern::ReportFormat::json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
      arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out += (i ? "," : "") + std::string(buf);
    }
    out += "\r\n";
  }
  return out;
}

int run(const std::string& command, const Options& o) {
  const auto format = wbern::parse_report_format(o.format);
  if (command == "coeffs") {
    const auto scheme = wbern::CombinationScheme::make(o.n, o.r);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < scheme.order(); ++i) {
      rows.push_back({static_cast<double>(i), static_cast<double>(scheme.nodes()[i]), scheme.coeffs()[i]});
    }
    write_text(table({"i", "node", "coeff"}, rows, format), o.out);
  } else if (command == "psi") {
    const auto psi = wbern::solve_psi_coefficients(o.r);
    std::vector<std::vector<double>> rows;
    const auto a = psi.coefficients();
    for (std::size_t j = 0; j < a.size(); ++j) rows.push_back({static_cast<double>(psi.lowest_power() + j), a[j]});
    write_text(table({"power", "coeff"}, rows, format), o.out);
  } else if (command == "approx") {
    emit(wbern::run_convergence(sweep_of(o)).errors, o);
  } else if (command == "compare") {
    const auto paired = wbern::compare_plain_vs_modified(sweep_of(o));
    check_finite(paired.plain);
    emit(paired.modified, o);
    if (!o.out.empty() && o.out != "-") {
      wbern::emit_report(paired.plain, format, plain_path(o.out));
    } else {
      write_text(wbern::format_report(paired.plain, format), o.out);
    }
  } else if (command == "bernstein-ineq") {
    emit(wbern::check_bernstein_inequality(sweep_of(o), o.lambda), o);
  } else if (command == "modulus") {
    const auto config = sweep_of(o);
    const auto f = wbern::make_function(wbern::FunctionSpec::parse(o.function), config.weight);
    const auto grid = wbern::EvaluationGrid::make(o.grid, o.xi);
    const double value = wbern::weighted_modulus(f, config.weight, wbern::ModulusParams{2 * o.r, o.t, o.h_count}, grid);
    if (!std::isfinite(value)) throw wbern::EvaluationError(o.t, "modulus is not finite");
    write_text(table({"t", "modulus"}, {{o.t, value}}, format), o.out);
  } else if (command == "lemma") {
    const wbern::Weight weight(o.xi, o.alpha);
    const auto grid = wbern::EvaluationGrid::make(o.grid, o.xi);
    switch (o.lemma) {
      case 1:
        emit(wbern::lemma1_scan(o.u, o.v, o.n_list, grid, o.threads), o);
        break;
      case 3: {
        const auto f = wbern::make_function(wbern::FunctionSpec::parse(o.function), weight);
        emit(wbern::lemma3_decay(o.r, weight, f, o.n_list, grid, o.threads), o);
        break;
      }
      case 5:
        emit(wbern::lemma5_scan(weight, o.n_list, grid, o.threads), o);
        break;
      case 6:
        emit(wbern::lemma6_scan(o.beta, weight, o.n_list, grid, o.threads), o);
        break;
      default:
        throw wbern::ConfigError("lemma must be one of 1, 3, 5, 6");
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted approximation by modified Bernstein combinations"};
  app.require_subcommand(1);
  std::string config_path;
  std::string n_list_text;
  Options flags;

  auto add_common = [&](CLI::App* sub, bool sweep) {
    sub->add_option("--config", config_path, "JSON file with option values; flags override it");
    sub->add_option("--r", flags.r, "combination order");
    sub->add_option("--format", flags.format, "csv or json");
    sub->add_option("--out", flags.out, "output file (stdout if omitted)");
    if (!sweep) return;
    sub->add_option("--n-list", n_list_text, "ascending degrees, comma separated");
    sub->add_option("--xi", flags.xi, "singularity location");
    sub->add_option("--alpha", flags.alpha, "weight exponent");
    sub->add_option("--function", flags.function, "catalog key, e.g. singular_power:beta=0.5");
    sub->add_option("--grid", flags.grid, "evaluation grid size");
    sub->add_option("--variant", flags.variant, "per_node or shared");
    sub->add_option("--threads", flags.threads, "worker threads");
    sub->add_option("--h-count", flags.h_count, "modulus step samples per octave");
  };

  auto* coeffs = app.add_subcommand("coeffs", "combination nodes and coefficients");
  add_common(coeffs, false);
  coeffs->add_option("--n", flags.n, "base degree");
  auto* psi = app.add_subcommand("psi", "smoothstep coefficients");
  add_common(psi, false);
  auto* approx = app.add_subcommand("approx", "weighted error sweep of the modified operator");
  add_common(approx, true);
  auto* compare = app.add_subcommand("compare", "plain against modified combination");
  add_common(compare, true);
  auto* ineq = app.add_subcommand("bernstein-ineq", "growth of the weighted 2r-th derivative");
  add_common(ineq, true);
  ineq->add_option("--lambda", flags.lambda, "step-weight exponent in [0,1]");
  auto* modulus = app.add_subcommand("modulus", "weighted modulus of smoothness");
  add_common(modulus, true);
  modulus->add_option("--t", flags.t, "modulus argument in (0, 1/8]");
  auto* lemma = app.add_subcommand("lemma", "lemma scans");
  add_common(lemma, true);
  lemma->add_option("which", flags.lemma, "1, 3, 5 or 6")->required();
  lemma->add_option("--u", flags.u, "left exponent (lemma 1)");
  lemma->add_option("--v", flags.v, "right exponent (lemma 1)");
  lemma->add_option("--beta", flags.beta, "moment exponent (lemma 6)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!n_list_text.empty()) flags.n_list = parse_n_list(n_list_text);
    Options opts = config_path.empty() ? Options{} : load_config(config_path);
    for (const auto& f : fields()) {
      const auto* opt = [&]() -> const CLI::Option* {
        try {
          return sub->get_option(f.flag);
        } catch (const CLI::OptionNotFound&) {
          return nullptr;
        }
      }();
      if (opt != nullptr && opt->count() > 0) f.copy(opts, flags);
    }
    opts.lemma = flags.lemma;
    return run(sub->get_name(), opts);
  } catch (const wbern::MinNTooSmall& e) {
    std::cerr << "error: " << e.what() << " (minimal admissible n: " << e.min_n() << ")\n";
    return kBadConfig;
  } catch (const wbern::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const wbern::SampleError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const wbern::EvaluationError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const wbern::SingularSystemError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::logic_error& e) {
    // DomainError, ClassMembershipError and ConfigError all land here.
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}
