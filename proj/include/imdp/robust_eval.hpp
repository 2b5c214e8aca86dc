#pragma once

#include "imdp/entropy.hpp"
#include "imdp/model.hpp"

namespace imdp {

struct RobustEvaluation {
  double value = 0.0;
  Adversary xi_worst;
  ValueFunction v;
};

/// Worst case of expected cost + beta * path entropy for a fixed policy,
/// with beta taken from the model. For a stochastic row the adversary ranges
/// over the weighted sum of the per-action feasible sets.
RobustEvaluation robust_eval_combined(const ImdpModel& model, const Policy& pi);

/// Worst case of the expected cumulative cost alone (entropy weight 0).
RobustEvaluation robust_eval_cost_only(const ImdpModel& model, const Policy& pi);

/// Summary of a fixed policy against both adversaries.
struct PolicyReport {
  double cost_bound = 0.0;           // robust_eval_cost_only value
  double combined_value = 0.0;       // robust_eval_combined value
  double cost_under_combined = 0.0;  // expected cost under the combined adversary
  /// Path entropy in bits under the combined adversary, i.e.
  /// (combined_value - cost_under_combined) / beta for beta > 0.
  double worst_case_entropy = 0.0;
  Adversary cost_adversary;
  Adversary combined_adversary;
};

PolicyReport evaluate_policy(const ImdpModel& model, const Policy& pi);

}  // namespace imdp
