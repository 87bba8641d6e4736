#pragma once

#include <stdexcept>
#include <string>

namespace tcs {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction would exceed the configured edge cap (or group-size cap).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument was violated (level out of range, malformed
/// walk, non-nested chain, nonzero-sum problem, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operator expected to commute with the isometry group does not (for
/// instance it maps a non-special cut vector to something nonzero).
class InvarianceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed. These indicate a bug or a broken
/// mathematical invariant and must never fire on valid input.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace tcs
