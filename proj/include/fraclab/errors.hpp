#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

/// Argument sits on (or within tolerance of) a pole of the function being evaluated.
class PoleError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Iterative evaluation (series, linear solve, ODE integration) failed to converge.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A windowed least-squares expansion did not reproduce the data to tolerance.
class FitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration or CLI arguments.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fraclab
