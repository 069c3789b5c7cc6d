#pragma once

#include <stdexcept>
#include <string>

namespace agc {

// Error taxonomy. The CLI maps categories to exit codes:
// ConfigError -> 2, DataError -> 3, NumericalFailure -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};
struct DataError : Error {
  using Error::Error;
};

struct InvalidConfig : ConfigError {
  using ConfigError::ConfigError;
};
struct UnknownKey : ConfigError {
  explicit UnknownKey(const std::string& key)
      : ConfigError("unknown config key: " + key) {}
};
struct ConfigTypeError : ConfigError {
  using ConfigError::ConfigError;
};

struct InvalidEdge : DataError {
  using DataError::DataError;
};
struct MissingComponent : DataError {
  using DataError::DataError;
};
struct ShapeMismatch : DataError {
  using DataError::DataError;
};
struct ParseError : DataError {
  using DataError::DataError;
};
struct TooFewPoints : DataError {
  using DataError::DataError;
};
struct EmptyGraph : DataError {
  using DataError::DataError;
};
struct EmptyClusterTarget : DataError {
  using DataError::DataError;
};
struct DegenerateDenominator : DataError {
  using DataError::DataError;
};
struct InfiniteDivergence : DataError {
  using DataError::DataError;
};

struct NumericalFailure : Error {
  using Error::Error;
};

}  // namespace agc
