#pragma once

#include <stdexcept>
#include <string>

namespace critpoly {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-finite values, bad degrees, reversed intervals.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A perturbation vector that would reorder roots or push them out of their group.
class InvalidPerturbation : public Error {
 public:
  using Error::Error;
};

/// A scalar root solve found no root in its bracket.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

/// A target lies outside the range of a monotone one-dimensional map.
class RangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace critpoly
