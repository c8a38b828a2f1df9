#pragma once

#include <stdexcept>
#include <string>

namespace bdatp {

// Contract violations: bad dimensions, out-of-range parameters, malformed
// arguments. CLI maps these to exit code 3.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input files (feature files, records, store metadata).
// CLI maps these to exit code 3.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Domain-state errors (exit code 2): the request was well formed but the
// store cannot satisfy it.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// I/O failures outside the caller's control (exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bdatp
