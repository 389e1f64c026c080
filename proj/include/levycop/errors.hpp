#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace levycop {

/// Invalid caller-supplied argument (wrong dimension, empty grid, bad family).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Target value outside the closure of a function's range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A function produced a value that cannot enter the requested arithmetic
/// (NaN, or an infinity where only finite values are meaningful).
class EvaluationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method failed to reach its tolerance. Carries the best
/// estimate available when it gave up.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate) {}
  explicit NumericError(const std::string& what)
      : NumericError(what, std::numeric_limits<double>::quiet_NaN()) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

/// Malformed declarative spec text.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levycop
