#pragma once

#include <stdexcept>
#include <string>

namespace destab {

// Base of every error raised by the library. The CLI maps each subclass to a
// distinct exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand sizes disagree (vector lengths, matrix shapes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An argument lies outside the domain of the operation (a permutation that
// crosses factor blocks, a matrix outside the group, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A documented precondition does not hold for the inputs.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The request is well formed but asks for something the toolkit does not do.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A runtime assertion on a computed result failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// An input document does not match its schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace destab
