#pragma once

#include <stdexcept>
#include <string>

namespace sdepth {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-domain arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

// Arguments are well-formed but an operation's precondition is not met.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class UnsupportedError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A configured enumeration/work cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant (e.g. rejection envelope violated).
class InternalError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

}  // namespace detail
}  // namespace sdepth
