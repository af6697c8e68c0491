#pragma once

#include <stdexcept>
#include <string>

namespace frdct {

// Input or precondition problem: bad data, bad configuration, malformed file.
class InvalidInputError : public std::invalid_argument {
public:
  explicit InvalidInputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failure during estimation (degenerate window, singular system, ...).
class EstimationError : public std::runtime_error {
public:
  explicit EstimationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Wald/TSLS first stage too weak to divide by; carries the one-sided means.
class WeakFirstStageError : public EstimationError {
public:
  WeakFirstStageError(const std::string& msg, double y_below, double y_above,
                      double t_below, double t_above)
      : EstimationError(msg), y_mean_below(y_below), y_mean_above(y_above),
        t_mean_below(t_below), t_mean_above(t_above) {}

  double y_mean_below;
  double y_mean_above;
  double t_mean_below;
  double t_mean_above;
};

}  // namespace frdct
