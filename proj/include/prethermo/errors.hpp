#pragma once

#include <stdexcept>
#include <string>

namespace prethermo {

// Bad physical or numerical input (non-Hermitian state, xi out of range, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Iterative numerics failed (eigensolver did not converge within its cap).
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed configuration or CLI input.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structural invariant was violated in produced output.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace prethermo
