#pragma once

#include <stdexcept>
#include <string>

namespace phvi {

// Every library failure derives from Error so callers can map categories to
// exit codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sensor metadata that cannot describe a valid frame (levels, pattern, crop).
class InvalidMetadataError : public Error {
 public:
  using Error::Error;
};

/// Odd or mismatched spatial / channel dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Scalar parameter outside its admissible domain (k <= 0, singular matrix).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Sample values outside the range an operation accepts.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Missing layer or layer with a shape the network does not expect.
class WeightError : public Error {
 public:
  using Error::Error;
};

/// Malformed file or sidecar content. `field()` names the offending key.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace phvi
