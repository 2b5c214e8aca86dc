#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "imdp/model.hpp"

namespace imdp {

/// Probabilities below this are treated as exactly zero in entropy terms.
inline constexpr double kEntropyFloor = 1e-15;

/// x * log2(x) with 0 * log 0 = 0.
double xlog2x(double x);

/// Shannon entropy in bits.
double shannon_entropy(std::span<const double> p);

/// -beta * sum p log2 p + sum p v. Throws DimensionError on length mismatch
/// and std::invalid_argument on a negative component of p.
double phi(std::span<const double> p, std::span<const double> v, double beta);

enum class ValueRole { Cost, Entropy, Combined };

/// Stage-indexed table of state values, stages 0..h.
struct ValueFunction {
  ValueRole role = ValueRole::Combined;
  std::vector<std::vector<double>> stages;

  std::size_t horizon() const { return stages.empty() ? 0 : stages.size() - 1; }
  const std::vector<double>& at(std::size_t k) const { return stages.at(k); }
};

struct CostRecursion {
  ValueFunction u;
  double expected_cost = 0.0;
};

/// Backward recursion for the expected cumulative cost under a fixed chain.
CostRecursion cost_recursion(const InducedChain& chain, const Policy& pi);

struct EntropyRecursion {
  ValueFunction w;
  double entropy = 0.0;  // joint path entropy in bits, unweighted
};

EntropyRecursion entropy_recursion(const InducedChain& chain);

/// Largest number of length-(h+1) paths path_entropy_direct will visit.
inline constexpr double kPathEnumerationBudget = 1e6;

/// Joint entropy of (X_0, ..., X_h) by enumerating every path with nonzero
/// probability. Throws BudgetExceeded when |S|^(h+1) exceeds the budget.
double path_entropy_direct(const InducedChain& chain);

}  // namespace imdp
