#pragma once

#include <stdexcept>
#include <string>

namespace resonance {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside its documented domain (bad grid size, negative viscosity, dt <= 0, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Operation undefined for this input, e.g. a singular multiplier applied to data with nonzero mean.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// The resonance branch split is undefined because the kernel coefficient S_k vanishes.
class DegenerateResonance : public Error {
 public:
  using Error::Error;
};

/// Time integration produced NaN or runaway values.
class SolverDiverged : public Error {
 public:
  SolverDiverged(const std::string& what, double time)
      : Error(what + " (t=" + std::to_string(time) + ")"), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// The implicit stage equation did not converge within the iteration budget.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// A scalar root solve failed to converge.
class RootFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration; carries the offending key and line (0 if none).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key = {}, int line = 0)
      : Error(format(what, key, line)), key_(std::move(key)), line_(line) {}
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& what, const std::string& key, int line) {
    std::string msg = what;
    if (!key.empty()) msg += " [key '" + key + "']";
    if (line > 0) msg += " [line " + std::to_string(line) + "]";
    return msg;
  }
  std::string key_;
  int line_;
};

/// File-system failure, with the path involved.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace resonance
