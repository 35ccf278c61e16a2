#pragma once

#include <stdexcept>
#include <string>

namespace epictrl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A single integration step left the state simplex by more than the rejection
// tolerance; the step size is too large for the local dynamics.
struct StepRejected : Error {
  using Error::Error;
};

// The requested stop condition was not reached before max_time.
struct HorizonExceeded : Error {
  using Error::Error;
};

// The trajectory's tail cost cannot be certified zero.
struct IncompleteTrajectory : Error {
  using Error::Error;
};

struct PreconditionViolated : Error {
  using Error::Error;
};

// Filling-the-box run started above the threshold.
struct InfeasibleStart : Error {
  using Error::Error;
};

// No recovery rate in the scan grid reproduces the target costs.
struct CalibrationFailed : Error {
  using Error::Error;
};

// Scenario or control file could not be parsed.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace epictrl
