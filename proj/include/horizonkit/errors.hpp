#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace horizonkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HORIZONKIT_DEFINE_ERROR(Name)   \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

HORIZONKIT_DEFINE_ERROR(AxisError);
HORIZONKIT_DEFINE_ERROR(EmptyInputError);
HORIZONKIT_DEFINE_ERROR(ToleranceError);
HORIZONKIT_DEFINE_ERROR(DistributionError);
HORIZONKIT_DEFINE_ERROR(DegenerateReferenceError);
HORIZONKIT_DEFINE_ERROR(InsufficientHistoryError);
HORIZONKIT_DEFINE_ERROR(DegenerateHistoryError);
HORIZONKIT_DEFINE_ERROR(BurnInError);
HORIZONKIT_DEFINE_ERROR(CoverageError);
HORIZONKIT_DEFINE_ERROR(OrientationError);
HORIZONKIT_DEFINE_ERROR(InputOrderError);
HORIZONKIT_DEFINE_ERROR(ParameterError);
HORIZONKIT_DEFINE_ERROR(IoError);

#undef HORIZONKIT_DEFINE_ERROR

/// Malformed input file. `line()` is 1-based, or 0 when the problem is
/// structural (e.g. a missing cell) rather than tied to one line.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t line)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid experiment configuration; `key()` names the offending
/// `section.key`.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace horizonkit
