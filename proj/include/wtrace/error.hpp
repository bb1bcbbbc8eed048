#pragma once

#include <stdexcept>
#include <string>

namespace wtrace {

/// Input violates an operation's precondition (bad sizes, out-of-range knobs).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed: refinement budget exhausted, eigensolver
/// non-convergence, ill-posed fit. The message names the failing operation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unknown configuration content.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

}  // namespace wtrace
