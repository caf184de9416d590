#pragma once

#include <stdexcept>
#include <string>

namespace soundscape {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid analysis parameters (window sizes, nfft, sensitivity, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Campaign CSV is missing a required column or contains duplicate rows.
class MetadataSchemaError : public Error {
 public:
  using Error::Error;
};

/// A start_date value could not be parsed as a zoned ISO-8601 timestamp.
class TimestampFormatError : public Error {
 public:
  using Error::Error;
};

/// WAV file uses a compression or sample format we do not decode.
class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

/// WAV file structure is damaged (truncated chunks, bad header fields).
class CorruptFileError : public Error {
 public:
  using Error::Error;
};

/// Matrix/vector dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A segment produced zero full analysis windows; the caller drops it.
class EmptySegmentError : public Error {
 public:
  using Error::Error;
};

/// Third-octave analysis preconditions violated (nfft, frequency range, ...).
class TolConfigError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace soundscape
