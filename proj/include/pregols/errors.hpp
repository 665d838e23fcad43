#pragma once

#include <stdexcept>
#include <string>

namespace pregols {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: non-finite entries, wrong shapes, non-binary treatment.
class InvalidInputError : public Error {
public:
  using Error::Error;
};

class DimensionError : public InvalidInputError {
public:
  using InvalidInputError::InvalidInputError;
};

/// A rank or model precondition (A1, A2, B1, leave-one-out ranks) does not
/// hold for the supplied data.
class AssumptionError : public Error {
public:
  AssumptionError(std::string assumption, const std::string& detail)
      : Error("assumption " + assumption + " violated: " + detail),
        assumption_(std::move(assumption)) {}

  const std::string& assumption() const noexcept { return assumption_; }

private:
  std::string assumption_;
};

/// File-system or parse failure; the message carries the offending path.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace pregols
