#pragma once

#include <stdexcept>
#include <string>

namespace jumpspec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (e.g. x outside [0,1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Base of every failure produced by the numerical machinery itself.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The integrator step size fell below the underflow limit.
class StiffnessError : public NumericalError {
 public:
  StiffnessError(const std::string& what, double x) : NumericalError(what), x_(x) {}
  double location() const noexcept { return x_; }

 private:
  double x_;
};

/// No zero-free contour could be found near the requested one.
class ContourError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A contour integral or residual could not be driven below its target.
class AccuracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Quadtree subdivision did not isolate the zeros.
class ClusteringError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The measured winding number disagrees with the count of the isolating box.
class InconsistencyError : public NumericalError {
 public:
  InconsistencyError(const std::string& what, int winding, int expected)
      : NumericalError(what), winding_(winding), expected_(expected) {}
  int winding() const noexcept { return winding_; }
  int expected() const noexcept { return expected_; }

 private:
  int winding_;
  int expected_;
};

/// The spectral parameter is too close to a point where the requested
/// operator is singular; `magnitude` is the offending small quantity.
class NearSingularityError : public NumericalError {
 public:
  NearSingularityError(const std::string& what, double magnitude)
      : NumericalError(what), magnitude_(magnitude) {}
  double magnitude() const noexcept { return magnitude_; }

 private:
  double magnitude_;
};

/// A search completed but found nothing.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace jumpspec
