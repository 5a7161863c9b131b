#pragma once

#include <stdexcept>
#include <string>

namespace cgst {

// Raised for malformed inputs: shapes, ranges, schema violations.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a numerical invariant that must hold mathematically is broken,
// e.g. a Bell value below the quantum bound. Indicates a bug or corrupt input.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cgst
