#pragma once

#include <string>

#include "json.hpp"

#include "imdp/model.hpp"
#include "imdp/robust_eval.hpp"
#include "imdp/value_iteration.hpp"

namespace imdp {

namespace gridworld {
struct ExperimentReport;
}

using Json = nlohmann::json;

// Model document:
//   { "states": [...], "actions": [...], "alpha": [...],
//     "stage_cost": [[...]],              // [state][action]
//     "terminal_cost": [...],
//     "p_lower": [[[...]]], "p_upper": [[[...]]],  // [state][action][next]
//     "horizon": h, "beta": b }            // beta optional, default 1
// Parsing checks shapes and types only (InputError / DimensionError);
// validate_model() is the authority on interval conditions.
Json model_to_json(const ImdpModel& model);
ImdpModel model_from_json(const Json& doc);
ImdpModel load_model(const std::string& path);

/// Deterministic: [stage][state] -> action index.
/// Stochastic: [stage][state][action] -> probability.
Json policy_to_json(const Policy& pi);
/// Accepts either form, bare or under a "policy" key (so a solve result
/// document can be passed directly).
Policy policy_from_json(const Json& doc, const ImdpModel& model);

/// [stage][state][action] -> next-state distribution.
Json adversary_to_json(const Adversary& xi);
/// Bare array or under an "adversary" key. Feasibility is not checked here.
Adversary adversary_from_json(const Json& doc, const ImdpModel& model);

/// j_bar_star, policy, adversary, v_star, and (optionally) per-(k,s,a)
/// inner-solver diagnostics.
Json solve_result_to_json(const SolveResult& result, bool with_diagnostics);

Json evaluation_to_json(const RobustEvaluation& eval, const std::string& objective);

Json experiment_summary_json(const gridworld::ExperimentReport& report);

Json load_json(const std::string& path);

}  // namespace imdp
