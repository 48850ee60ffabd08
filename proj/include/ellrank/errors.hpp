#pragma once

#include <stdexcept>
#include <string>

namespace ellrank {

// Base of every error the library throws. The CLI maps the subclasses to
// exit codes: InputError -> 2, MissingData -> 3, InvariantViolation -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class MissingData : public Error {
 public:
  using Error::Error;
};

// A computed quantity broke an identity that must hold exactly.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

inline void check_invariant(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation("invariant violated: " + what);
}

}  // namespace ellrank
