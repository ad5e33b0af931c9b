#pragma once

#include <stdexcept>
#include <string>

namespace vdp {

// Bad input to an operation (non-positive bin width, empty trajectory count, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters outside the model's domain (kappa2 <= 0, degenerate rates).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operation applied to an object in the wrong state (empty ensemble, all-zero grid).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Base for guard trips raised while integrating or measuring.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScheduleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepSizeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RenormalizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace vdp
