#pragma once

#include <stdexcept>
#include <string>

namespace quakescore {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable, malformed or non-conforming input (files, manifests, flags).
class InputError : public Error {
 public:
  using Error::Error;
};

// Two inputs that must share a raster size do not.
class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

// Well-formed input on which the requested quantity is undefined,
// e.g. scoring a mask with no structure pixels.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace quakescore
