#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hydrodae {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid scenario, grid, or parameter input. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File could not be read, parsed, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Any numerical breakdown. CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A time step failed: Newton did not converge, the linear solve was
/// singular, or the converged state is inadmissible.
class StepFailure : public NumericalError {
 public:
  StepFailure(const std::string& what, int step, std::vector<double> trace = {})
      : NumericalError(what), step_(step), trace_(std::move(trace)) {}

  int step() const noexcept { return step_; }
  /// Increment norms of each Newton iteration attempted.
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  int step_;
  std::vector<double> trace_;
};

class RankError : public NumericalError {
 public:
  RankError(const std::string& what, double condition_estimate, int step = -1)
      : NumericalError(what), condition_(condition_estimate), step_(step) {}

  double condition_estimate() const noexcept { return condition_; }
  int step() const noexcept { return step_; }

 private:
  double condition_;
  int step_;
};

class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace hydrodae
