#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ocf {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Structurally invalid input (inadmissible digit, malformed grid, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inadmissible truncation hit while evaluating a continued fraction.
class ZeroDenominatorError : public ValidationError {
 public:
  ZeroDenominatorError(const std::string& what, std::size_t index)
      : ValidationError(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A numerical target could not be met. Carries what was achieved and, for
/// series truncations, the depth that would have been required.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved, long required_depth = 0)
      : std::runtime_error(what), achieved_(achieved), required_depth_(required_depth) {}
  double achieved() const noexcept { return achieved_; }
  long required_depth() const noexcept { return required_depth_; }

 private:
  double achieved_;
  long required_depth_;
};

}  // namespace ocf
