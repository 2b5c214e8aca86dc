#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imdp {

/// Base class for every error raised by the library.
class ImdpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: ragged arrays, wrong dimensions, out-of-range indices.
class DimensionError : public ImdpError {
 public:
  using ImdpError::ImdpError;
};

/// Missing fields or wrong value types in an input document.
class InputError : public ImdpError {
 public:
  using ImdpError::ImdpError;
};

/// A model (or a policy/adversary) violates its interval or stochasticity
/// invariants.
class ValidationError : public ImdpError {
 public:
  using ImdpError::ImdpError;
};

/// A probability vector lies outside its feasible set, or a feasible set is
/// empty.
class InfeasibleError : public ImdpError {
 public:
  using ImdpError::ImdpError;
};

/// An enumeration would exceed its hard budget.
class BudgetExceeded : public ImdpError {
 public:
  using ImdpError::ImdpError;
};

/// The inner solver failed to bracket or converge.
class SolverError : public ImdpError {
 public:
  using ImdpError::ImdpError;
};

/// Prefixes `what` with the (stage, state, action) location it refers to.
inline std::string at_location(std::size_t k, std::size_t s, std::size_t a,
                               const std::string& what) {
  return "(k=" + std::to_string(k) + ", s=" + std::to_string(s) +
         ", a=" + std::to_string(a) + "): " + what;
}

}  // namespace imdp
