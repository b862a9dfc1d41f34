#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace persist {

enum class ErrorKind {
  NonSquare,
  RowSumViolation,
  NegativeEntry,
  IoError,
  ParseError,
  NotAClass,
  TooLarge,
  NotPeripheral,
  NotInRange,
  NoConvergence,
  Timeout,
  RankMismatch,
  IdempotentVerificationFailed,
  VerificationFailed,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Base of every error raised by the library. The kind identifies the
// failure; the subclass identifies the family (and the CLI exit code).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Malformed or invalid input data (files, matrices).
class InputError : public Error {
 public:
  using Error::Error;
};

// A precondition of an operation does not hold for the given arguments.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An iterative limit did not settle within its budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A computed object failed its a-posteriori structural check.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace persist
