#pragma once
#include <stdexcept>

namespace cavmag {

// Error taxonomy mirrored by the CLI exit codes:
// ConfigError -> 2, NumericalError -> 3, EstimationError -> 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cavmag
