#pragma once

#include <stdexcept>
#include <string>

namespace homsamp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad exponent, empty input,
/// unknown generator name, level out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The frame operator is singular or too ill-conditioned to invert.
class IncompleteFrame : public Error {
 public:
  using Error::Error;
};

/// A file could not be parsed or does not match the expected schema.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace homsamp
