#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "imdp/model.hpp"

namespace imdp {

struct InnerSolveDiagnostics {
  double nu_star = 0.0;  // multiplier of the sum-to-one constraint
  int iterations = 0;
  double residual = 0.0;  // |sum p - 1| when the bisection stopped
  std::vector<std::size_t> active_lower;
  std::vector<std::size_t> active_upper;
};

struct InnerSolveResult {
  std::vector<double> p_star;
  double value = 0.0;
  InnerSolveDiagnostics diagnostics;
};

inline constexpr double kInnerSumTol = 1e-10;
inline constexpr int kInnerMaxIterations = 200;

/// Maximizes stage_cost + phi(p, v, beta) over p in `box` intersected with
/// the simplex.
///
/// For beta > 0 the maximizer has the clamped exponential form
///   p_q(nu) = clamp(2^((v_q - nu) / beta - log2 e), lower_q, upper_q)
/// and nu is found by bisection on sum_q p_q(nu) = 1. For beta = 0 the
/// problem is a linear program solved greedily: start from the lower bounds
/// and raise components in decreasing order of v (ties: lower index first).
///
/// Throws InfeasibleError for an empty box, SolverError if the dual bracket
/// cannot be established or the sum constraint cannot be met.
InnerSolveResult solve_inner(const FeasibleSet& box, std::span<const double> v,
                             double stage_cost, double beta);

/// Stationarity expression -beta log2 p_q - beta log2 e + v_q used by the
/// optimality certificate.
double stationarity(double p, double v, double beta);

// -- Mixtures --------------------------------------------------------------
//
// Under a stochastic policy row w the adversary picks one vector per action,
// so the realized next-state distribution ranges over the weighted Minkowski
// sum  M = sum_a w_a * P_a  of the per-action feasible sets. Each P_a is the
// base polytope of f_a(T) = min(upper_a(T), 1 - lower_a(complement of T)),
// hence M is the base polytope of g = sum_a w_a f_a, and the separable
// concave objective is maximized over it by the decomposition algorithm.

struct MixtureSolveResult {
  std::vector<double> mixture;                  // sum_a w_a p_a
  std::vector<std::vector<double>> components;  // p_a, each in P_a
  double value = 0.0;                           // expected_cost + phi(mixture)
};

/// Largest state count accepted by the mixture solver (it enumerates subsets).
inline constexpr std::size_t kMaxMixtureStates = 20;

/// Maximizes expected_cost + phi(sum_a w_a p_a, v, beta) over p_a in boxes[a].
/// Actions with zero weight receive their own single-action maximizer.
MixtureSolveResult solve_inner_mixture(std::span<const FeasibleSet> boxes,
                                       std::span<const double> weights,
                                       std::span<const double> v,
                                       double expected_cost, double beta);

/// Splits a point of the weighted Minkowski sum back into per-action
/// feasible vectors. Throws InfeasibleError if `mixture` is not in the sum.
std::vector<std::vector<double>> split_mixture(std::span<const FeasibleSet> boxes,
                                               std::span<const double> weights,
                                               std::span<const double> mixture);

/// Box spanned by the weighted per-action bounds. Contains the Minkowski sum
/// but is in general strictly larger.
FeasibleSet aggregated_box(std::span<const FeasibleSet> boxes,
                           std::span<const double> weights);

}  // namespace imdp
