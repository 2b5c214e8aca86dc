#include "imdp/robust_eval.hpp"

#include "imdp/errors.hpp"
#include "imdp/inner_solver.hpp"
#include "imdp/parallel.hpp"

namespace imdp {

namespace {

RobustEvaluation robust_eval(const ImdpModel& model, const Policy& pi, double beta) {
  require_valid(model);
  check_policy(model, pi);
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();
  const std::size_t h = model.horizon;

  RobustEvaluation out;
  out.xi_worst = Adversary(h, ns, na);
  out.v.role = beta > 0.0 ? ValueRole::Combined : ValueRole::Cost;
  out.v.stages.assign(h + 1, std::vector<double>(ns, 0.0));
  out.v.stages[h] = model.terminal_cost;

  std::vector<std::vector<FeasibleSet>> boxes(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t a = 0; a < na; ++a) boxes[s].push_back(feasible_set(model, s, a));
  }

  for (std::size_t k = h; k-- > 0;) {
    const auto& next = out.v.stages[k + 1];
    parallel_for(ns, [&](std::size_t s) {
      const auto w = pi.row(k, s);
      double cost = 0.0;
      for (std::size_t a = 0; a < na; ++a) cost += w[a] * model.cost(s, a);
      MixtureSolveResult r;
      try {
        r = solve_inner_mixture(boxes[s], w, next, cost, beta);
      } catch (const ImdpError& e) {
        throw SolverError(at_location(k, s, 0, e.what()));
      }
      for (std::size_t a = 0; a < na; ++a) out.xi_worst.set(k, s, a, r.components[a]);
      out.v.stages[k][s] = r.value;
    });
  }
  out.value = phi(model.alpha, out.v.stages[0], beta);
  return out;
}

}  // namespace

RobustEvaluation robust_eval_combined(const ImdpModel& model, const Policy& pi) {
  return robust_eval(model, pi, model.beta);
}

RobustEvaluation robust_eval_cost_only(const ImdpModel& model, const Policy& pi) {
  return robust_eval(model, pi, 0.0);
}

PolicyReport evaluate_policy(const ImdpModel& model, const Policy& pi) {
  PolicyReport report;
  auto cost = robust_eval_cost_only(model, pi);
  auto combined = robust_eval_combined(model, pi);
  const InducedChain chain = induce_chain(model, pi, combined.xi_worst);
  report.cost_bound = cost.value;
  report.combined_value = combined.value;
  report.cost_under_combined = cost_recursion(chain, pi).expected_cost;
  report.worst_case_entropy = entropy_recursion(chain).entropy;
  report.cost_adversary = std::move(cost.xi_worst);
  report.combined_adversary = std::move(combined.xi_worst);
  return report;
}

}  // namespace imdp
