#pragma once

#include <stdexcept>
#include <string>

namespace curlstab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateTetrahedron : public Error {
 public:
  using Error::Error;
};

class UnsupportedDegree : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class ConditioningFailure : public Error {
 public:
  using Error::Error;
};

/// The right-hand side is not in the range of the constraint matrix.
class Infeasible : public Error {
 public:
  using Error::Error;
};

class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

/// Problem data violate the compatibility conditions of the minimization.
class IncompatibleData : public Error {
 public:
  using Error::Error;
};

class PropertyViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace curlstab
