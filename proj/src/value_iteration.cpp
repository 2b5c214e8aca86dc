#include "imdp/value_iteration.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "imdp/errors.hpp"
#include "imdp/parallel.hpp"

namespace imdp {

SolveResult solve(const ImdpModel& model) {
  require_valid(model);
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();
  const std::size_t h = model.horizon;

  SolveResult out;
  out.adversary = Adversary(h, ns, na);
  out.v_star.role = ValueRole::Combined;
  out.v_star.stages.assign(h + 1, std::vector<double>(ns, 0.0));
  out.v_star.stages[h] = model.terminal_cost;
  out.stage_diagnostics.assign(
      h, std::vector<std::vector<InnerSolveDiagnostics>>(ns, std::vector<InnerSolveDiagnostics>(na)));
  std::vector<std::vector<std::size_t>> actions(h, std::vector<std::size_t>(ns, 0));

  for (std::size_t k = h; k-- > 0;) {
    const auto& next = out.v_star.stages[k + 1];
    parallel_for(ns, [&](std::size_t s) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_action = 0;
      for (std::size_t a = 0; a < na; ++a) {
        InnerSolveResult r;
        try {
          r = solve_inner(feasible_set(model, s, a), next, model.cost(s, a), model.beta);
        } catch (const ImdpError& e) {
          throw SolverError(at_location(k, s, a, e.what()));
        }
        if (r.value < best) {
          best = r.value;
          best_action = a;
        }
        out.adversary.set(k, s, a, r.p_star);
        out.stage_diagnostics[k][s][a] = std::move(r.diagnostics);
      }
      out.v_star.stages[k][s] = best;
      actions[k][s] = best_action;
    });
  }

  out.policy = Policy::deterministic(actions, na);
  out.j_bar_star = phi(model.alpha, out.v_star.stages[0], model.beta);
  return out;
}

double deterministic_stage_value(const ImdpModel& model, std::size_t s,
                                 std::span<const double> v_next) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < model.num_actions(); ++a) {
    best = std::min(best, solve_inner(feasible_set(model, s, a), v_next, model.cost(s, a),
                                      model.beta)
                              .value);
  }
  return best;
}

namespace {

// Calls visit(w) for every weight vector whose entries are integer
// multiples of 1/denominator, offset by `origin` and restricted to
// |entry - origin| <= radius / denominator. Negative entries are skipped.
void for_each_simplex_point(std::size_t m, int denominator, const std::vector<double>& origin,
                            int radius, const std::function<void(const std::vector<double>&)>& visit) {
  std::vector<double> w(m, 0.0);
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double used) {
    if (i + 1 == m) {
      w[i] = 1.0 - used;
      if (w[i] < -1e-12) return;
      if (w[i] < 0.0) w[i] = 0.0;
      visit(w);
      return;
    }
    const int base = static_cast<int>(std::lround(origin[i] * denominator));
    for (int d = -radius; d <= radius; ++d) {
      const int units = base + d;
      if (units < 0 || units > denominator) continue;
      w[i] = static_cast<double>(units) / denominator;
      if (used + w[i] > 1.0 + 1e-12) break;
      rec(i + 1, used + w[i]);
    }
  };
  rec(0, 0.0);
}

}  // namespace

RandomizedStageValue solve_randomized_stage(const ImdpModel& model, std::size_t s,
                                            std::span<const double> v_next) {
  const std::size_t na = model.num_actions();
  if (na > 3) {
    throw DimensionError("solve_randomized_stage supports at most 3 actions, model has " +
                         std::to_string(na));
  }
  if (s >= model.num_states() || v_next.size() != model.num_states()) {
    throw DimensionError("solve_randomized_stage: state or value vector out of range");
  }
  std::vector<FeasibleSet> boxes;
  for (std::size_t a = 0; a < na; ++a) boxes.push_back(feasible_set(model, s, a));

  auto evaluate = [&](const std::vector<double>& w) {
    double cost = 0.0;
    for (std::size_t a = 0; a < na; ++a) cost += w[a] * model.cost(s, a);
    return solve_inner_mixture(boxes, w, v_next, cost, model.beta).value;
  };

  RandomizedStageValue best;
  best.value = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& w) {
    const double value = evaluate(w);
    if (value < best.value - 1e-12) {
      best.value = value;
      best.pi_row = w;
    }
  };

  for (std::size_t a = 0; a < na; ++a) {
    std::vector<double> vertex(na, 0.0);
    vertex[a] = 1.0;
    consider(vertex);
  }
  constexpr int kCoarse = 40;
  const std::vector<double> zero(na, 0.0);
  for_each_simplex_point(na, kCoarse, zero, kCoarse, consider);
  const std::vector<double> center = best.pi_row;
  for_each_simplex_point(na, 10 * kCoarse, center, 10, consider);
  return best;
}

}  // namespace imdp
