#pragma once

#include <stdexcept>
#include <string>

namespace hyperreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition on shapes or argument ranges.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition of an operation does not hold (R <= 2,
/// non-positive diagonal before sketching, ...).
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// Cholesky met a non-positive pivot.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// sigma_min(A) is zero or the Gram matrix is singular.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// A loss kernel produced a non-finite intermediate.
class Overflow : public Error {
 public:
  using Error::Error;
};

class UnsupportedShape : public Error {
 public:
  using Error::Error;
};

/// The reference Newton run did not reach its gradient tolerance.
class OracleFailed : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. The message carries the path and line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, written or renamed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperreg
