#pragma once

#include <stdexcept>
#include <string>

namespace opalg {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A presentation (block list, spanning set, JSON document) does not describe a
// finite-dimensional unital *-algebra.
class InvalidPresentation : public Error {
 public:
  using Error::Error;
};

// An element or state was used with an algebra it does not belong to.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inputs violate an operation's precondition (non-self-adjoint observables,
// non-unit vectors, commuting projections, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// No copy of the 2x2 matrices exists inside a commutative algebra.
class NoEmbedding : public Error {
 public:
  using Error::Error;
};

// A randomized routine exhausted its retries or a numerical invariant failed.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// A serialized document is malformed or has an unsupported schema version.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace opalg
