#pragma once

#include <stdexcept>
#include <string>

namespace hofa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in incompatible spaces (different p, dimension or depth).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside its mathematical domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed the configured enumeration cap or budget.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A postcondition that must hold by construction was observed to fail.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hofa
