#pragma once

#include <stdexcept>
#include <string>

namespace tvq {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or malformed configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The model data violates a positivity / ordering assumption.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Staffing cannot absorb the queue inside an overloaded interval.
class InfeasibleStaffingError : public Error {
 public:
  using Error::Error;
};

/// The fluid model stays critically loaded on a set of positive length.
class CriticalLoadingError : public Error {
 public:
  using Error::Error;
};

/// A numerical quantity left its admissible range (vanishing density, etc.).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace tvq
