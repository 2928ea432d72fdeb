#pragma once

#include <stdexcept>
#include <string>

namespace capinn {

// Shape or size mismatch between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Iterative routine exceeded its sweep/iteration budget.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// NaN or Inf produced during evaluation. `op` names the operation that
// produced the first non-finite value.
struct NonFiniteError : std::runtime_error {
  std::string op;
  explicit NonFiniteError(std::string op_kind)
      : std::runtime_error("non-finite value produced by op '" + op_kind + "'"),
        op(std::move(op_kind)) {}
};

// Division jet evaluated at a zero denominator value.
struct SingularPointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Derivative order outside the supported range.
struct UnsupportedOrderError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Optimizer state does not match the parameters it is applied to.
struct StateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace capinn
