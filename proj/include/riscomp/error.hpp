#pragma once

#include <stdexcept>
#include <string>

namespace riscomp {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where a model is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Vector lengths or dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A moment-matched fit would be degenerate (nonpositive variance).
class FitError : public Error {
 public:
  using Error::Error;
};

/// A type invariant (energy split, allocation factors, ...) is broken.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration file or CLI input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Training produced non-finite numbers.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace riscomp
