// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "wbern/basis.hpp"
#include "wbern/blend.hpp"
#include "wbern/catalog.hpp"
#include "wbern/combination.hpp"
#include "wbern/errors.hpp"
#include "wbern/operator.hpp"
#include "wbern/rate_fit.hpp"
#include "wbern/smoothness.hpp"
#include "wbern/weight.hpp"

namespace wbern {

/// One convergence experiment. Fully deterministic: no random inputs, and the
/// result does not depend on `threads`.
struct SweepConfig {
  std::size_t r = 2;
  Weight weight{0.513, 1.0};
  std::string function_key = "smooth_sin";
  std::vector<std::size_t> n_list{32, 64, 128, 256, 512, 1024};
  std::size_t grid_size = 2001;
  BlendDegree variant = BlendDegree::per_node;
  std::size_t h_count = 8;
  std::size_t threads = 1;

  /// Checks orders and the degree list; with `need_patch`, also that every
  /// ladder degree admits the singularity patch (MinNTooSmall otherwise).
  void validate(bool need_patch = true) const {
    if (r == 0 || r > kMaxSmoothstepOrder) {
      throw ConfigError("sweep: r must lie in [1," + std::to_string(kMaxSmoothstepOrder) + "]");
    }
    if (n_list.empty()) throw ConfigError("sweep: empty degree list");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
      if (n_list[i] == 0) throw ConfigError("sweep: degrees must be positive");
      if (i > 0 && n_list[i] <= n_list[i - 1]) throw ConfigError("sweep: degree list must be strictly ascending");
    }
    if (grid_size < 16) throw ConfigError("sweep: grid size must be at least 16");
    if (threads == 0) throw ConfigError("sweep: thread count must be positive");
    if (!need_patch) return;
    for (std::size_t n : n_list) {
      for (std::size_t i = 0; i < r; ++i) {
        const std::size_t degree = variant == BlendDegree::per_node ? (i + 1) * n : n;
        (void)BlendSpec::make(degree, r, weight);
      }
    }
  }
};

namespace detail {

// Runs work(i) for i in [0, count) on up to `threads` threads. Results land in
// index order; the first failure by index is rethrown.
template <typename Result, typename Work>
[[nodiscard]] std::vector<Result> parallel_indexed(std::size_t count, std::size_t threads, Work work) {
  std::vector<Result> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t used = std::min(std::max<std::size_t>(threads, 1), std::max<std::size_t>(count, 1));
  if (used <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(used);
    for (std::size_t t = 0; t < used; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

[[nodiscard]] inline RateReport fit_over(const std::vector<std::size_t>& ns, const std::vector<double>& values) {
  std::vector<RateRow> rows;
  rows.reserve(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) rows.push_back({ns[i], values[i]});
  return fit_rate(std::move(rows));
}

}  // namespace detail

/// Weighted error of the modified operator per degree, with the two sides of the
/// direct estimate: the weighted modulus at t = n^{-1/2} and n^{-r} times the weighted norm of f.
struct ConvergenceResult {
  RateReport errors;
  std::vector<double> modulus;       ///< omega^{2r}_phi(f, min(n^{-1/2}, 1/8))_w per row
  std::vector<double> modulus_t;     ///< the t used per row
  double weighted_norm_f = 0.0;      ///< ||w f|| on the grid
  std::vector<double> max_lagrange;  ///< max |l_i| over the base-degree blend window per row

  /// E_n / (omega + n^{-r} ||w f||) per row.
  [[nodiscard]] std::vector<double> coherence_ratios(std::size_t r) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < errors.rows.size(); ++i) {
      const double n = static_cast<double>(errors.rows[i].n);
      out.push_back(errors.rows[i].value / (modulus[i] + std::pow(n, -static_cast<double>(r)) * weighted_norm_f));
    }
    return out;
  }
};

/// Max over the grid of w(x) |op(f)(x) - f(x)| for the ladder samples of one degree.
template <RealFunction F>
[[nodiscard]] double weighted_error(const CombinationScheme& scheme, std::span<const SampleVector> samples, const F& f,
                                    const Weight& weight, const EvaluationGrid& grid) {
  return weighted_norm([&](double x) { return combine_samples(scheme, samples, x) - static_cast<double>(f(x)); },
                       weight, grid);
}

[[nodiscard]] inline ConvergenceResult run_convergence(const SweepConfig& config) {
  config.validate();
  const auto f = make_function(FunctionSpec::parse(config.function_key), config.weight);
  const auto grid = EvaluationGrid::make(config.grid_size, config.weight.xi());

  struct Item {
    double error = 0.0;
    double modulus = 0.0;
    double t = 0.0;
    double max_l = 0.0;
  };
  const auto items = detail::parallel_indexed<Item>(config.n_list.size(), config.threads, [&](std::size_t i) {
    const std::size_t n = config.n_list[i];
    const auto op = ModifiedOperator::make(n, config.r, config.weight, config.variant);
    const auto samples = sample_modified(op, f);
    Item item;
    item.error = weighted_error(op.scheme(), samples, f, config.weight, grid);
    item.t = std::min(1.0 / std::sqrt(static_cast<double>(n)), ModulusParams::kMaxT);
    item.modulus = weighted_modulus(f, config.weight, ModulusParams{2 * config.r, item.t, config.h_count}, grid);
    item.max_l = op.specs().front().max_basis_magnitude();
    return item;
  });

  ConvergenceResult result;
  std::vector<double> errors;
  for (const auto& item : items) {
    errors.push_back(item.error);
    result.modulus.push_back(item.modulus);
    result.modulus_t.push_back(item.t);
    result.max_lagrange.push_back(item.max_l);
  }
  result.errors = detail::fit_over(config.n_list, errors);
  result.weighted_norm_f = weighted_norm(f, config.weight, grid);
  return result;
}

/// Plain combination (samples of f itself) against the modified one on the same sweep.
struct PairedReport {
  RateReport plain;
  RateReport modified;
};

[[nodiscard]] inline PairedReport compare_plain_vs_modified(const SweepConfig& config) {
  config.validate();
  const auto f = make_function(FunctionSpec::parse(config.function_key), config.weight);
  const auto grid = EvaluationGrid::make(config.grid_size, config.weight.xi());
  struct Item {
    double plain = 0.0;
    double modified = 0.0;
  };
  const auto items = detail::parallel_indexed<Item>(config.n_list.size(), config.threads, [&](std::size_t i) {
    const auto op = ModifiedOperator::make(config.n_list[i], config.r, config.weight, config.variant);
    Item item;
    item.plain = weighted_error(op.scheme(), sample_ladder(f, op.scheme()), f, config.weight, grid);
    item.modified = weighted_error(op.scheme(), sample_modified(op, f), f, config.weight, grid);
    return item;
  });
  std::vector<double> plain;
  std::vector<double> modified;
  for (const auto& item : items) {
    plain.push_back(item.plain);
    modified.push_back(item.modified);
  }
  return {detail::fit_over(config.n_list, plain), detail::fit_over(config.n_list, modified)};
}

/// ||w phi^{2 r lambda} d^{2r}/dx^{2r} B_{n,r}(F_n)|| per degree; the fitted slope is the growth exponent.
[[nodiscard]] inline RateReport check_bernstein_inequality(const SweepConfig& config, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("bernstein-ineq: lambda must lie in [0,1]");
  config.validate();
  const auto f = make_function(FunctionSpec::parse(config.function_key), config.weight);
  const auto grid = EvaluationGrid::make(config.grid_size, config.weight.xi());
  const double power = 2.0 * static_cast<double>(config.r) * lambda;
  const auto values = detail::parallel_indexed<double>(config.n_list.size(), config.threads, [&](std::size_t i) {
    const auto op = ModifiedOperator::make(config.n_list[i], config.r, config.weight, config.variant);
    const auto samples = sample_modified(op, f);
    return weighted_norm(
        [&](double x) { return std::pow(step_weight(x), power) * combination_derivative_2r(op.scheme(), samples, x); },
        config.weight, grid);
  });
  return detail::fit_over(config.n_list, values);
}

/// max over x in [1/n, 1-1/n] of sum_{k=1}^{n-1} (k/n)^{-u} (1-k/n)^{-v} p_{nk}(x) / (x^{-u} (1-x)^{-v}).
[[nodiscard]] inline RateReport lemma1_scan(double u, double v, const std::vector<std::size_t>& n_list,
                                            const EvaluationGrid& grid, std::size_t threads = 1) {
  if (!(u >= 0.0 && v >= 0.0)) throw ConfigError("lemma 1: exponents must be nonnegative");
  const auto values = detail::parallel_indexed<double>(n_list.size(), threads, [&](std::size_t i) {
    const std::size_t n = n_list[i];
    const double nd = static_cast<double>(n);
    const auto inner = grid.restricted(1.0 / nd, 1.0 - 1.0 / nd);
    double best = 0.0;
    for (double x : inner.points()) {
      CompensatedSum acc;
      for (std::size_t k = 1; k < n; ++k) {
        const double t = static_cast<double>(k) / nd;
        acc += std::pow(t, -u) * std::pow(1.0 - t, -v) * bernstein_basis(n, k, x);
      }
      best = std::max(best, acc.value() / (std::pow(x, -u) * std::pow(1.0 - x, -v)));
    }
    return best;
  });
  return detail::fit_over(n_list, values);
}

/// max over grid points of [x'_1, x'_4] of w(x) |f(x) - H(f, x)| per degree.
template <RealFunction F>
[[nodiscard]] RateReport lemma3_decay(std::size_t r, const Weight& weight, const F& f,
                                      const std::vector<std::size_t>& n_list, const EvaluationGrid& grid,
                                      std::size_t threads = 1) {
  const auto values = detail::parallel_indexed<double>(n_list.size(), threads, [&](std::size_t i) {
    const auto spec = BlendSpec::make(n_list[i], r, weight);
    const auto node_values = spec.patch().sample(f);
    const auto& b = spec.breakpoints();
    return weighted_norm(
        [&](double x) { return static_cast<double>(f(x)) - spec.patch().evaluate(node_values, x); }, weight,
        grid.restricted(b[0], b[3]));
  });
  return detail::fit_over(n_list, values);
}

namespace detail {

// k with |k - n xi| <= sqrt(n)
[[nodiscard]] inline std::pair<std::size_t, std::size_t> central_window(std::size_t n, double xi) {
  const double nd = static_cast<double>(n);
  const double lo = std::max(0.0, std::ceil(nd * xi - std::sqrt(nd)));
  const double hi = std::min(nd, std::floor(nd * xi + std::sqrt(nd)));
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

}  // namespace detail

/// A_n(x) = w(x) sum_{|k - n xi| <= sqrt n} p_{nk}(x), maximized over the grid per degree.
[[nodiscard]] inline RateReport lemma5_scan(const Weight& weight, const std::vector<std::size_t>& n_list,
                                            const EvaluationGrid& grid, std::size_t threads = 1) {
  const auto values = detail::parallel_indexed<double>(n_list.size(), threads, [&](std::size_t i) {
    const std::size_t n = n_list[i];
    const auto [lo, hi] = detail::central_window(n, weight.xi());
    double best = 0.0;
    for (double x : grid.points()) {
      CompensatedSum acc;
      for (std::size_t k = lo; k <= hi; ++k) acc += bernstein_basis(n, k, x);
      best = std::max(best, weight(x) * acc.value());
    }
    return best;
  });
  return detail::fit_over(n_list, values);
}

/// max over x in [1/n, 1-1/n] of w(x) sum_{|k - n xi| <= sqrt n} |k - n x|^beta p_{nk}(x) / (n^{beta - alpha/2} phi(x)^beta).
[[nodiscard]] inline RateReport lemma6_scan(double beta, const Weight& weight, const std::vector<std::size_t>& n_list,
                                            const EvaluationGrid& grid, std::size_t threads = 1) {
  if (!(beta > 0.0)) throw ConfigError("lemma 6: beta must be positive");
  const auto values = detail::parallel_indexed<double>(n_list.size(), threads, [&](std::size_t i) {
    const std::size_t n = n_list[i];
    const double nd = static_cast<double>(n);
    const auto [lo, hi] = detail::central_window(n, weight.xi());
    const double scale = std::pow(nd, beta - 0.5 * weight.alpha());
    double best = 0.0;
    for (double x : grid.restricted(1.0 / nd, 1.0 - 1.0 / nd).points()) {
      CompensatedSum acc;
      for (std::size_t k = lo; k <= hi; ++k) {
        acc += std::pow(std::abs(static_cast<double>(k) - nd * x), beta) * bernstein_basis(n, k, x);
      }
      best = std::max(best, weight(x) * acc.value() / (scale * std::pow(step_weight(x), beta)));
    }
    return best;
  });
  return detail::fit_over(n_list, values);
}

}  // namespace wbern
