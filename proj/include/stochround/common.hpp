#pragma once

#include <stdexcept>
#include <string>

namespace stochround {

// Malformed input documents (JSON that does not parse or lacks fields).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that violates a model invariant.  The message
// names the offending field or quantity.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Internal inconsistency that indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace stochround
