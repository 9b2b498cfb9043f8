#pragma once

#include <stdexcept>
#include <string>

namespace curvlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation left the mathematical domain of an operation (sqrt of a
// negative value, log at zero, metric evaluated outside its chart, ...).
struct DomainError : Error {
  using Error::Error;
};

// Metric failed the positive-definiteness check at a queried point.
struct SpdError : DomainError {
  using DomainError::DomainError;
};

// Quadrature or ODE integration failed to converge.
struct NumericError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(std::string msg, int line, int col)
      : Error(std::move(msg)), line(line), col(col) {}
  int line;
  int col;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace curvlab
