#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmrc {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed arguments that violate an operation's preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Well-formed request the library deliberately does not handle
// (field widths other than 8/16, MSR with d != 2k-2, ...).
class Unsupported : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero in finite field") {}
};

class SingularMatrix : public Error {
 public:
  explicit SingularMatrix(std::size_t column)
      : Error("singular matrix: no pivot in column " + std::to_string(column)),
        column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

// A code definition that does not satisfy the product-matrix constraints.
class InvalidConstruction : public Error {
 public:
  using Error::Error;
};

// Not enough independent encoded symbols to recover the requested data.
class Unrecoverable : public Error {
 public:
  using Error::Error;
};

// Malformed text or binary input (code files, matrices, shard headers).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace pmrc
