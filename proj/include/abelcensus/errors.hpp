#pragma once

#include <stdexcept>
#include <string>

namespace abelcensus {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed groups, parameters, class sets, configs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A configured cap (lattice size, bound size, search space) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An operation was asked about an input outside its domain
/// (e.g. wild images at a prime not dividing |G|).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A mathematical quantity is undefined for the given data
/// (empty minimum, missing witness, zero denominators).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed. Always a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace abelcensus
