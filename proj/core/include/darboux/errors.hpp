#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace darboux {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector, point or matrix does not have the dimension the chart expects.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A field was evaluated outside its domain (log of a non-positive number,
/// division by zero, differentiation nested deeper than supported).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Expression text could not be parsed.
class ParseError : public Error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, Arity };

  ParseError(Kind kind, std::size_t position, const std::string& message)
      : Error(message + " (at offset " + std::to_string(position) + ")"),
        kind_(kind),
        position_(position) {}

  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

/// A linear system that must be invertible was found singular.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// A basis handed to a subspace routine is linearly dependent, or a
/// parametrization / constraint Jacobian is rank-deficient.
class RankError : public Error {
 public:
  using Error::Error;
};

/// Contract violation on the reduction / symmetry side (non-invariant
/// Hamiltonian, non-adapted action, nonzero moment level, ...).
class ReductionError : public Error {
 public:
  enum class Kind { NonzeroMoment, NotAdapted, NotInvariant, NotAbelian, StartMismatch, LeafMismatch, HorizontalPoint };

  ReductionError(Kind kind, const std::string& message, double value = 0.0)
      : Error(message), kind_(kind), value_(value) {}

  Kind kind() const { return kind_; }
  /// The offending magnitude, when there is one (e.g. max |xi(H)|).
  double value() const { return value_; }

 private:
  Kind kind_;
  double value_;
};

}  // namespace darboux
