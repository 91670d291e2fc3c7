// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wbern {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A linear system or interpolation basis that has no unique solution.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function sample was requested where the function is not finite.
class SampleError : public std::runtime_error {
 public:
  SampleError(double abscissa, const std::string& what)
      : std::runtime_error(what), abscissa_(abscissa) {}

  [[nodiscard]] double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

/// The degree is too small for the singularity patch to fit inside (0,1).
class MinNTooSmall : public std::domain_error {
 public:
  MinNTooSmall(std::size_t n, std::size_t min_n, const std::string& what)
      : std::domain_error(what), n_(n), min_n_(min_n) {}

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t min_n() const noexcept { return min_n_; }

 private:
  std::size_t n_;
  std::size_t min_n_;
};

/// A catalog function paired with a weight it does not belong to.
class ClassMembershipError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A weighted quantity came out non-finite.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(double abscissa, const std::string& what)
      : std::runtime_error(what), abscissa_(abscissa) {}

  [[nodiscard]] double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

/// Malformed experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wbern
