#pragma once

#include <stdexcept>
#include <string>

namespace betaplane {

// Every library failure derives from Error. The CLI maps the three
// categories onto exit codes 2 (parse), 3 (precondition/guard) and
// 4 (numerical non-convergence).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept = 0;
  virtual const char* kind() const noexcept = 0;
};

class ParseError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
  const char* kind() const noexcept override { return "parse"; }
};

class PreconditionError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
  const char* kind() const noexcept override { return "precondition"; }
};

class ConfigurationError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
  const char* kind() const noexcept override { return "configuration"; }
};

/// Raised when a frequency pair sits on (or within the guard of) one of the
/// singular sets of the phase.
class SingularConfigurationError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
  const char* kind() const noexcept override { return "singular-configuration"; }
};

class IndexError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
  const char* kind() const noexcept override { return "index"; }
};

class StepSizeError : public PreconditionError {
 public:
  StepSizeError(const std::string& what, double max_velocity)
      : PreconditionError(what), max_velocity_(max_velocity) {}
  const char* kind() const noexcept override { return "step-size"; }
  double max_velocity() const noexcept { return max_velocity_; }

 private:
  double max_velocity_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  int exit_code() const noexcept override { return 4; }
  const char* kind() const noexcept override { return "convergence"; }
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class TruncationError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
  const char* kind() const noexcept override { return "truncation-insufficient"; }
};

[[noreturn]] void throw_precondition(const std::string& what);

}  // namespace betaplane
