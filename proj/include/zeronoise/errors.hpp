#ifndef ZERONOISE_ERRORS_HPP
#define ZERONOISE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zeronoise {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user-facing configuration (grids, thresholds, config files).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation requires a specific ambient dimension.
struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

// A range-based operation was handed an empty range.
struct EmptyRangeError : std::runtime_error {
  explicit EmptyRangeError(const std::string& msg) : std::runtime_error(msg) {}
};

// The simulated state left the sane region; signals a misconfigured model.
struct NumericalBlowup : std::runtime_error {
  explicit NumericalBlowup(const std::string& msg) : std::runtime_error(msg) {}
};

// A statistical fit could not satisfy its acceptance fraction.
struct FitFailure : std::runtime_error {
  explicit FitFailure(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace zeronoise

#endif
