#pragma once

#include <stdexcept>
#include <string>

namespace ffdpat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grids, sinogram specs or masks that do not fit together.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Time step violates the stability bound for the supplied sound speed.
class CflError : public Error {
 public:
  using Error::Error;
};

/// Detector range does not cover the support of the field being projected.
class ClippingError : public Error {
 public:
  using Error::Error;
};

/// A closed-form reconstruction was asked to run outside its hypothesis.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Iterates blew up; the message carries the diagnostic.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Argument outside its documented domain (negative tau, empty grid, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace ffdpat
