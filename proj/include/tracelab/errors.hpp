#pragma once

#include <stdexcept>
#include <string>

namespace tracelab {

// Bad construction parameters, malformed config, unsupported combination.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An estimator could not deliver a certified number (non-convergence,
// uncertifiable tail, representation overflow).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tracelab
