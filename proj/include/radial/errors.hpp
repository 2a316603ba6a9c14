#pragma once

#include <stdexcept>
#include <string>

namespace radial {

// Error taxonomy shared by all modules. Everything derives from Error so
// callers can catch the whole family at the CLI boundary.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SyntaxError : Error {
  SyntaxError(const std::string& what, std::size_t pos)
      : Error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
  std::size_t position;
};

struct OverflowError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct RangeError : Error {
  using Error::Error;
};

struct ParamError : Error {
  using Error::Error;
};

// Antiderivative hit a term with no exp-Laurent primitive (logarithmic case
// or fractional power under an exponential); callers fall back to quadrature.
struct UnsupportedTerm : Error {
  using Error::Error;
};

struct IllConditioned : Error {
  using Error::Error;
};

// Even-k root of a sign-changing radicand requested.
struct SignError : Error {
  using Error::Error;
};

struct SingularMatrix : Error {
  using Error::Error;
};

struct StepFailure : Error {
  StepFailure(const std::string& what, double t_last, double y_last)
      : Error(what), t(t_last), y(y_last) {}
  double t;  // last valid state
  double y;
};

struct StencilOutOfDomain : Error {
  using Error::Error;
};

}  // namespace radial
