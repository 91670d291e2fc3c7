// SPDX-License-Identifier: MIT
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "golden.hpp"
#include "wbern/combination.hpp"
#include "wbern/errors.hpp"
#include "wbern/linalg.hpp"

using namespace wbern;
using wbern::testing::oracle;

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Gauss-Jordan on the Vandermonde system sum_i C_i n_i^{-k} = delta_{k0}, k = 0..r-1.
std::vector<Rational> exact_coefficients(const std::vector<std::size_t>& nodes) {
  const std::size_t r = nodes.size();
  std::vector<std::vector<Rational>> m(r, std::vector<Rational>(r + 1));
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < r; ++i) {
      Rational v = 1;
      for (std::size_t p = 0; p < k; ++p) v /= Rational(nodes[i]);
      m[k][i] = v;
    }
    m[k][r] = k == 0 ? 1 : 0;
  }
  for (std::size_t c = 0; c < r; ++c) {
    std::size_t p = c;
    while (m[p][c] == 0) ++p;
    std::swap(m[p], m[c]);
    for (std::size_t i = 0; i < r; ++i) {
      if (i == c || m[i][c] == 0) continue;
      const Rational f = m[i][c] / m[c][c];
      for (std::size_t j = c; j <= r; ++j) m[i][j] -= f * m[c][j];
    }
  }
  std::vector<Rational> out(r);
  for (std::size_t i = 0; i < r; ++i) out[i] = m[i][r] / m[i][i];
  return out;
}

}  // namespace

TEST(Schedule, LadderRule) {
  EXPECT_EQ(make_schedule(100, 3), (std::vector<std::size_t>{100, 200, 300}));
  EXPECT_EQ(make_schedule(7, 1), (std::vector<std::size_t>{7}));
  const auto five = make_schedule(50, 5);
  EXPECT_EQ(five, (std::vector<std::size_t>{50, 100, 150, 200, 250}));
  EXPECT_LE(five.back(), 5u * five.front());
}

TEST(Coefficients, SpecExamples) {
  EXPECT_EQ(solve_coefficients(std::vector<std::size_t>{37}), (std::vector<double>{1.0}));
  const auto two = solve_coefficients(std::vector<std::size_t>{64, 128});
  EXPECT_NEAR(two[0], -1.0, 1e-12);
  EXPECT_NEAR(two[1], 2.0, 1e-12);
  const auto three = solve_coefficients(std::vector<std::size_t>{64, 128, 192});
  EXPECT_NEAR(three[0], 0.5, 1e-12);
  EXPECT_NEAR(three[1], -4.0, 1e-12);
  EXPECT_NEAR(three[2], 4.5, 1e-12);
}

TEST(Coefficients, MatchExactRationalSolve) {
  for (const auto& nodes : std::vector<std::vector<std::size_t>>{
           {10, 20}, {10, 20, 30}, {33, 40, 51, 70}, {32, 64, 96, 128, 160}, {100, 101, 103}}) {
    const auto got = solve_coefficients(nodes);
    const auto want = exact_coefficients(nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double w = want[i].convert_to<double>();
      EXPECT_LE(std::abs(got[i] - w), 1e-12 * std::max(1.0, std::abs(w))) << i;
    }
  }
}

TEST(Coefficients, MatchPivotedSolve) {
  for (std::size_t r = 1; r <= 6; ++r) {
    const auto nodes = make_schedule(40, r);
    linalg::Matrix a(r);
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t i = 0; i < r; ++i) a(k, i) = std::pow(static_cast<double>(nodes[i]), -static_cast<double>(k));
    }
    std::vector<double> rhs(r, 0.0);
    rhs[0] = 1.0;
    const auto lu = linalg::solve(a, rhs);
    const auto closed = solve_coefficients(nodes);
    for (std::size_t i = 0; i < r; ++i) EXPECT_NEAR(lu[i], closed[i], 1e-9 * std::max(1.0, std::abs(closed[i])));
  }
}

TEST(Coefficients, DuplicateNodesAreSingular) {
  EXPECT_THROW((void)solve_coefficients(std::vector<std::size_t>{10, 10}), SingularSystemError);
  EXPECT_THROW((void)CombinationScheme(std::vector<std::size_t>{10, 20}, std::vector<double>{0.5, 0.5}), DomainError);
}

TEST(Coefficients, AbsSumTable) {
  for (const auto& row : oracle().at("combination")) {
    const auto r = row.at("r").get<std::size_t>();
    EXPECT_NEAR(ladder_abs_sum(r), row.at("abs_sum").get<double>(), 1e-10);
    EXPECT_NEAR(CombinationScheme::make(97, r).abs_sum(), row.at("abs_sum").get<double>(), 1e-10);
    const auto scheme = CombinationScheme::make(97, r);
    const auto c = scheme.coeffs();
    const auto want = row.at("coefficients").get<std::vector<double>>();
    for (std::size_t i = 0; i < r; ++i) EXPECT_NEAR(c[i], want[i], 1e-12 * std::max(1.0, std::abs(want[i])));
  }
}

// Property: the coefficient vector does not depend on the base degree.
TEST(CoefficientsProperty, IndependentOfBaseDegree) {
  for (std::size_t r = 1; r <= 6; ++r) {
    const auto ref = solve_coefficients(make_schedule(1, r));
    for (std::size_t n = 2; n <= 3000; n += 37) {
      const auto c = solve_coefficients(make_schedule(n, r));
      for (std::size_t i = 0; i < r; ++i) EXPECT_NEAR(c[i], ref[i], 1e-12 * std::max(1.0, std::abs(ref[i])));
    }
  }
}

TEST(CoefficientsProperty, ConditionsHoldOverWideRange) {
  for (std::size_t r = 1; r <= 6; ++r) {
    for (std::size_t n : {1, 5, 32, 511, 2048, 10000}) {
      const auto s = CombinationScheme::make(n, r);
      EXPECT_LE(s.sum_residual(), 1e-10);
      for (std::size_t k = 1; k < r; ++k) EXPECT_LE(s.moment_residual(k), 1e-10) << r << " " << n << " " << k;
    }
  }
}

TEST(Combine, SpecExamples) {
  const auto s2 = CombinationScheme::make(40, 2);
  for (double x : {0.0, 0.17, 0.5, 0.93, 1.0}) {
    EXPECT_NEAR(combine([](double) { return 1.0; }, s2, x), 1.0, 1e-12);
    EXPECT_NEAR(combine([](double t) { return t; }, s2, x), x, 1e-11);
    EXPECT_NEAR(combine([](double t) { return t * t; }, s2, x), x * x, 1e-13);
  }
}

TEST(Combine, SampleErrorNamesTheAbscissa) {
  const auto s = CombinationScheme::make(8, 2);
  try {
    (void)combine([](double t) { return 1.0 / (t - 0.5); }, s, 0.3);
    FAIL();
  } catch (const SampleError& e) {
    EXPECT_DOUBLE_EQ(e.abscissa(), 0.5);
  }
}

TEST(Moment, SpecExamples) {
  for (std::size_t r = 1; r <= 4; ++r) {
    EXPECT_NEAR(moment(CombinationScheme::make(50, r), 1, 0.37), 0.0, 1e-12);
  }
  EXPECT_LE(std::abs(moment(CombinationScheme::make(64, 2), 2, 0.25)), 1e-10);
  EXPECT_NEAR(moment(CombinationScheme::make(64, 1), 2, 0.25), 0.1875 / 64.0, 1e-15);
}

// Property: degree <= r polynomials are reproduced since every lower-order term is cancelled.
TEST(CombineProperty, ReproducesPolynomialsUpToOrder) {
  for (std::size_t r = 1; r <= 5; ++r) {
    const auto s = CombinationScheme::make(30, r);
    auto p = [r](double t) {
      double v = 0.0;
      for (std::size_t j = r + 1; j-- > 0;) v = v * t + std::cos(static_cast<double>(j));
      return v;
    };
    for (int i = 0; i <= 20; ++i) {
      const double x = i / 20.0;
      EXPECT_NEAR(combine(p, s, x), p(x), 1e-10) << r << " " << x;
    }
  }
}

// Moment decay: B_{n,r}((t-x)^{2r-j}, x) / (n^{-r} phi^{2r-2j}) stays bounded as n doubles.
TEST(MomentProperty, HigherMomentsDecayAtRateNToMinusR) {
  for (std::size_t r = 1; r <= 3; ++r) {
    for (std::size_t j = 0; j <= r; ++j) {
      std::vector<double> maxima;
      for (std::size_t n = 32; n <= 512; n *= 2) {
        const auto s = CombinationScheme::make(n, r);
        double best = 0.0;
        for (int i = 1; i < 200; ++i) {
          const double x = i / 200.0;
          if (x < 1.0 / n || x > 1.0 - 1.0 / n) continue;
          const double phi2 = x * (1.0 - x);
          const double scale = std::pow(static_cast<double>(n), -static_cast<double>(r)) *
                               std::pow(phi2, static_cast<double>(r) - static_cast<double>(j));
          best = std::max(best, std::abs(moment(s, 2 * r - j, x)) / scale);
        }
        maxima.push_back(best);
      }
      if (2 * r - j <= r) continue;  // annihilated moments are pure rounding
      const double slope = std::log(maxima.back() / maxima.front()) / std::log(16.0);
      EXPECT_LE(std::abs(slope), 0.3) << "r=" << r << " j=" << j;
    }
  }
}
