#pragma once

#include <stdexcept>
#include <string>

namespace ndphoton {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A grid does not resolve the field it is asked to hold (pitch, extent or
/// bandwidth inequality violated). The message names the failed inequality.
class SamplingError : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Field handed to an operation in the wrong domain (position vs momentum).
class DomainTagError : public Error {
public:
  using Error::Error;
};

/// Translating a spectrum would push non-negligible energy off the grid.
class ShiftOverflowError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace ndphoton
