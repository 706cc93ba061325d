#pragma once

#include <stdexcept>
#include <string>

namespace symspec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different generator counts or degrees.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A quotient or coordinate request whose denominator/vector is not contained
/// in the numerator.
class ContainmentError : public Error {
 public:
  using Error::Error;
};

/// An internal identity failed. Signals an operator or algorithm bug, never bad
/// user input. `witness()` carries the offending form or index when available.
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what, std::string witness = {})
      : Error(witness.empty() ? what : what + " (witness: " + witness + ")"),
        witness_(std::move(witness)) {}

  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

/// Rejected model input: JSON syntax, schema, or failed symplectic validation.
class ModelError : public Error {
 public:
  enum class Kind {
    syntax,
    schema,
    odd_dimension,
    unknown_generator,
    unknown_builtin,
    validation,
  };

  ModelError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace symspec
