#pragma once

#include <stdexcept>
#include <string>

namespace sos_cones {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input arrays do not have the dimensions an operation expects.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Selected interpolation points are (numerically) not unisolvent.
class DegeneratePoints : public Error {
 public:
  using Error::Error;
};

/// The least-squares system defining an initial interior point is singular.
class DegenerateBasis : public Error {
 public:
  using Error::Error;
};

/// A barrier quantity was requested at a point outside the open cone.
class InfeasiblePoint : public Error {
 public:
  using Error::Error;
};

/// A factorization required by a block-arrow identity failed.
class SingularPoint : public Error {
 public:
  using Error::Error;
};

/// The barrier Hessian could not be factorized (too close to the boundary).
class NumericallySingularHessian : public Error {
 public:
  using Error::Error;
};

/// An envelope formulation was requested for an incompatible norm.
class FormulationMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace sos_cones
