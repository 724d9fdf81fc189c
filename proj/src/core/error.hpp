#pragma once

#include <stdexcept>
#include <string>

namespace gs {

/// Raised when an operation's preconditions fail in a way the caller can
/// report (insufficient truncation, malformed input, inconsistent recursion).
class ComputationError : public std::runtime_error {
 public:
  explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gs
