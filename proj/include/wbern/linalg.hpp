// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "wbern/errors.hpp"

namespace wbern::linalg {

/// Row-major dense square matrix.
class Matrix {
 public:
  explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// LU factorization with partial pivoting, computed on construction.
class PivotedLU {
 public:
  explicit PivotedLU(Matrix a) : lu_(std::move(a)), perm_(lu_.size()) {
    const std::size_t n = lu_.size();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      for (std::size_t row = col + 1; row < n; ++row) {
        if (std::abs(lu_(row, col)) > std::abs(lu_(pivot, col))) pivot = row;
      }
      if (lu_(pivot, col) == 0.0) {
        singular_ = true;
        continue;
      }
      if (pivot != col) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(pivot, j), lu_(col, j));
        std::swap(perm_[pivot], perm_[col]);
        sign_ = -sign_;
      }
      for (std::size_t row = col + 1; row < n; ++row) {
        const double factor = lu_(row, col) / lu_(col, col);
        lu_(row, col) = factor;
        for (std::size_t j = col + 1; j < n; ++j) lu_(row, j) -= factor * lu_(col, j);
      }
    }
  }

  [[nodiscard]] bool singular() const noexcept { return singular_; }

  [[nodiscard]] double determinant() const noexcept {
    if (singular_) return 0.0;
    double det = sign_;
    for (std::size_t i = 0; i < lu_.size(); ++i) det *= lu_(i, i);
    return det;
  }

  [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const {
    if (singular_) throw SingularSystemError("linear system is singular");
    const std::size_t n = lu_.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = rhs[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
      x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = x[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
      x[i] = s / lu_(i, i);
    }
    return x;
  }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  double sign_ = 1.0;
  bool singular_ = false;
};

/// Solves A x = b, then applies one step of iterative refinement.
[[nodiscard]] inline std::vector<double> solve(const Matrix& a, std::span<const double> b) {
  const PivotedLU lu(a);
  std::vector<double> x = lu.solve(b);
  const std::size_t n = a.size();
  std::vector<double> residual(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double s = b[i];
    for (std::size_t j = 0; j < n; ++j) s -= static_cast<long double>(a(i, j)) * x[j];
    residual[i] = static_cast<double>(s);
  }
  const std::vector<double> dx = lu.solve(residual);
  for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
  return x;
}

}  // namespace wbern::linalg
