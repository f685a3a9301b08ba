#pragma once

#include <stdexcept>
#include <string>

namespace adpt {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, inconsistent dimensions, out-of-range options.
class InputError : public Error {
 public:
  using Error::Error;
};

// Syntax errors from the expression / problem-file / CSV parsers.
// Messages carry the offending position or line.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

// Domain errors while evaluating an expression (log of a non-positive value,
// division by zero, ...).
class EvalError : public Error {
 public:
  using Error::Error;
};

// A trajectory or coefficient sequence blew up.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_ = 0.0;
};

// The regression matrix of the first iteration is rank deficient, i.e. the
// collected data is not informative enough to identify all coefficients.
class ExcitationError : public Error {
 public:
  using Error::Error;
};

}  // namespace adpt
