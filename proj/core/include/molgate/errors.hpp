#pragma once

#include <stdexcept>
#include <string>

namespace molgate {

// Invalid user-facing configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Any failure of the numerics (calibration, propagation, convergence).
// The CLI maps this family to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CalibrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BranchLabelError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace molgate
