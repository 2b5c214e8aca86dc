#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "imdp/model.hpp"

namespace imdp {

// Brute-force verifiers. They share no code path with the production
// solvers beyond phi() and robust_eval_combined().

struct GridInnerResult {
  double value = 0.0;
  std::vector<double> p_best;
  std::size_t evaluated = 0;
};

/// Largest dimension grid_inner_oracle accepts.
inline constexpr std::size_t kGridOracleMaxStates = 4;

/// Grid search for max stage_cost + phi(p, v, beta) over the feasible set.
///
/// The first |S|-1 coordinates run over multiples of `resolution` inside
/// their box (box endpoints included); the last takes up the remaining mass
/// and candidates missing its box by at most `resolution` are projected back
/// onto the feasible set. The best point is then refined by neighbourhood
/// grids whose step shrinks tenfold per pass until it reaches `refine_to`
/// (default resolution / 100; pass 0 to skip refinement).
GridInnerResult grid_inner_oracle(const FeasibleSet& box, std::span<const double> v,
                                  double stage_cost, double beta, double resolution,
                                  double refine_to = -1.0);

/// Joint grid search over per-action tuples (p_a) for the mixture problem
/// max sum_a w_a c_a + phi(sum_a w_a p_a, v, beta). Tiny instances only:
/// two actions, at most three states.
GridInnerResult grid_mixture_oracle(std::span<const FeasibleSet> boxes,
                                    std::span<const double> weights,
                                    std::span<const double> v, double expected_cost,
                                    double beta, double resolution);

inline constexpr double kPolicyEnumerationBudget = 1e5;

struct PolicyOracleResult {
  double value = 0.0;
  Policy best_policy;
  std::size_t policies_evaluated = 0;
};

/// Minimum of robust_eval_combined over every deterministic Markov policy.
/// Throws BudgetExceeded when |A|^(|S| h) exceeds 1e5.
PolicyOracleResult exhaustive_policy_oracle(const ImdpModel& model);

}  // namespace imdp
