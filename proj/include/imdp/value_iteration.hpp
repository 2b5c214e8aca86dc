#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "imdp/entropy.hpp"
#include "imdp/inner_solver.hpp"
#include "imdp/model.hpp"

namespace imdp {

struct SolveResult {
  /// Robust optimum of expected cost + beta * joint path entropy.
  double j_bar_star = 0.0;
  Policy policy;        // deterministic minimizer, ties -> lowest action index
  Adversary adversary;  // worst-case response for every (k, s, a)
  ValueFunction v_star;
  /// stage_diagnostics[k][s][a]
  std::vector<std::vector<std::vector<InnerSolveDiagnostics>>> stage_diagnostics;
};

/// Robust value iteration over deterministic policies. Requires a valid
/// model (throws ValidationError otherwise); inner-solver failures are
/// rethrown as SolverError tagged with their (k, s, a).
SolveResult solve(const ImdpModel& model);

struct RandomizedStageValue {
  double value = 0.0;
  std::vector<double> pi_row;
};

/// Stage value when the policy may randomize over actions at state `s`:
///   min over w in the action simplex of
///   max over p_a in P_a of  sum_a w_a c(s,a) + phi(sum_a w_a p_a, v_next).
/// The outer minimum is taken over a simplex grid of step 1/40 with one
/// local refinement at step 1/400; vertices win ties. Verification only:
/// throws DimensionError for more than three actions.
RandomizedStageValue solve_randomized_stage(const ImdpModel& model, std::size_t s,
                                            std::span<const double> v_next);

/// Deterministic counterpart: min over a of max over p in P_a.
double deterministic_stage_value(const ImdpModel& model, std::size_t s,
                                 std::span<const double> v_next);

}  // namespace imdp
