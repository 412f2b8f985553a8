#pragma once

#include <stdexcept>
#include <string>

namespace horo {

/// A functional or witness was constructed with parameters outside its family
/// (for instance c < ||z||_p, or ||mu||_q > 1).
class InvariantViolation : public std::invalid_argument {
 public:
  explicit InvariantViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed JSON input, or JSON that does not match the expected schema.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace horo
