#pragma once

#include <stdexcept>
#include <string>

namespace sqg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input samples or coefficients contain NaN or infinity.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Spectral data is not the transform of a real field.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// The spectrum has no shells above the noise floor.
class UnresolvedSpectrum : public Error {
 public:
  using Error::Error;
};

/// The time integrator produced non-finite values.
class DivergedError : public Error {
 public:
  DivergedError(long step, double time);
  long step() const { return step_; }
  double time() const { return time_; }

 private:
  long step_;
  double time_;
};

/// A configuration field failed to parse or validate.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class SnapshotError : public Error {
 public:
  enum class Kind { io, bad_magic, version_mismatch, truncated, invalid_header };
  SnapshotError(Kind kind, const std::string& message);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace sqg
