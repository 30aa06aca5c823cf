#pragma once

#include <stdexcept>
#include <string>

namespace plw {

// Process exit codes used by the command line front end.
enum class ExitCode : int {
  ok = 0,
  invariant_failure = 2,
  non_convergence = 3,
  configuration = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const { return ExitCode::configuration; }
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The lattice is too coarse for the requested geometry.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// A cylinder or cube does not fit where the estimate requires it to.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// A truncation level for which the zero extension is not a sub-solution.
class InvalidLevel : public Error {
 public:
  using Error::Error;
};

// Oscillation larger than one; the caller must rescale the data.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }
  ExitCode exit_code() const override { return ExitCode::non_convergence; }

 private:
  double residual_;
};

// Newton failed at a given time level of the implicit solver.
class StepFailure : public ConvergenceError {
 public:
  StepFailure(const std::string& what, double residual, long step)
      : ConvergenceError(what, residual), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

// Adaptive quadrature did not reach its tolerance.
class ToleranceError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

}  // namespace plw
