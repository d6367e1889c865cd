#pragma once

#include <stdexcept>
#include <string>

namespace hlloco {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failures. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// KKT / constraint Jacobian lost rank (kinematic singularity).
class SingularConstraint : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Plastic impact needs the ground to pull on the foot.
class ImpactInfeasible : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Output-to-torque map is ill conditioned (relative degree lost).
class DecouplingSingular : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QPInfeasible : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonFiniteLoss : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EmptyLog : public Error {
 public:
  using Error::Error;
};

// Bad robot file, run config or CLI arguments. Exit code 2.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

}  // namespace hlloco
