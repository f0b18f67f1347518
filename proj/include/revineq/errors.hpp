#pragma once

#include <stdexcept>
#include <string>

namespace revineq {

/// Base for every error raised by the library. `origin()` names the module
/// and operation that raised it, e.g. "quadrature::integrate_radial".
class Error : public std::runtime_error {
 public:
  Error(std::string origin, const std::string& what)
      : std::runtime_error(origin + ": " + what), origin_(std::move(origin)) {}

  const std::string& origin() const noexcept { return origin_; }

 private:
  std::string origin_;
};

// Configuration / parameter class (CLI exit status 2).
class ParameterError : public Error {
  using Error::Error;
};
class ShapeError : public ParameterError {
  using ParameterError::ParameterError;
};
class PreconditionError : public ParameterError {
  using ParameterError::ParameterError;
};
class ConfigError : public ParameterError {
  using ParameterError::ParameterError;
};

// Numerical class (CLI exit status 3).
class NumericalError : public Error {
  using Error::Error;
};
class EvaluationError : public NumericalError {
  using NumericalError::NumericalError;
};
class DegenerateInputError : public NumericalError {
  using NumericalError::NumericalError;
};
class DivergenceError : public NumericalError {
  using NumericalError::NumericalError;
};
class EstimationError : public NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace revineq
