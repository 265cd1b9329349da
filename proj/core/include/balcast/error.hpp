#pragma once

#include <stdexcept>
#include <string>

namespace balcast {

/// Malformed or inconsistent input data (parse failures, bad ranges).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A referenced entity (account, file) does not exist.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation's precondition on its arguments was violated.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace balcast
