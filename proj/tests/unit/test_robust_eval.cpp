#include "doctest.h"

#include <cmath>

#include "imdp/entropy.hpp"
#include "imdp/robust_eval.hpp"
#include "imdp/value_iteration.hpp"
#include "support.hpp"

using namespace imdp;
namespace ts = testing_support;

namespace {

double realized(const ImdpModel& m, const Policy& pi, const Adversary& xi, double beta) {
  const auto chain = induce_chain(m, pi, xi);
  return cost_recursion(chain, pi).expected_cost + beta * entropy_recursion(chain).entropy;
}

}  // namespace

TEST_CASE("optimal policy evaluates to the solver bound") {
  ts::Rng rng(61);
  for (int i = 0; i < 40; ++i) {
    const auto m = ts::random_model(rng, ts::pick(rng, 1, 5), ts::pick(rng, 1, 3),
                                    ts::pick(rng, 0, 4), ts::uniform(rng, 0.0, 2.0));
    const auto r = solve(m);
    CHECK(std::abs(robust_eval_combined(m, r.policy).value - r.j_bar_star) <= 1e-9);
  }
}

TEST_CASE("degenerate intervals leave nothing to the adversary") {
  ts::Rng rng(62);
  for (int i = 0; i < 30; ++i) {
    const auto m = ts::degenerate_model(rng, 3, 2, 3, ts::uniform(rng, 0.0, 2.0));
    const auto pi = ts::random_deterministic_policy(rng, m);
    const auto xi = ts::random_feasible_adversary(rng, m);
    CHECK(robust_eval_combined(m, pi).value == doctest::Approx(realized(m, pi, xi, m.beta)).epsilon(1e-10));
  }
}

TEST_CASE("zero-cost model has zero cost bound") {
  ts::Rng rng(63);
  auto m = ts::random_model(rng, 3, 2, 3, 1.0);
  for (auto& c : m.stage_cost) c = 0.0;
  for (auto& c : m.terminal_cost) c = 0.0;
  CHECK(robust_eval_cost_only(m, ts::random_deterministic_policy(rng, m)).value == 0.0);
  CHECK(robust_eval_cost_only(m, ts::random_stochastic_policy(rng, m)).value == 0.0);
}

TEST_CASE("worst case dominates sampled adversaries") {
  ts::Rng rng(64);
  for (int i = 0; i < 10; ++i) {
    const auto m = ts::random_model(rng, 3, 2, 3, ts::uniform(rng, 0.2, 2.0));
    for (const auto& pi : {ts::random_deterministic_policy(rng, m), ts::random_stochastic_policy(rng, m)}) {
      const double combined = robust_eval_combined(m, pi).value;
      const double cost = robust_eval_cost_only(m, pi).value;
      for (int j = 0; j < 50; ++j) {
        const auto xi = ts::random_feasible_adversary(rng, m);
        CHECK(realized(m, pi, xi, m.beta) <= combined + 1e-9);
        CHECK(realized(m, pi, xi, 0.0) <= cost + 1e-9);
      }
    }
  }
}

TEST_CASE("deterministic two-state policy against an adversary grid") {
  ts::Rng rng(65);
  for (int i = 0; i < 10; ++i) {
    const auto m = ts::random_model(rng, 2, 2, 1, 1.0);
    const auto pi = ts::random_deterministic_policy(rng, m);
    const double value = robust_eval_combined(m, pi).value;
    // Sweep x = xi(s)[0] for both states on a 1e-3 grid.
    double best = -1e300;
    std::vector<std::vector<double>> axis(2);
    for (std::size_t s = 0; s < 2; ++s) {
      const auto box = feasible_set(m, s, pi.action(0, s));
      const double lo = std::max(box.lower[0], 1.0 - box.upper[1]);
      const double hi = std::min(box.upper[0], 1.0 - box.lower[1]);
      for (double x = lo; x <= hi + 1e-12; x += 1e-3) axis[s].push_back(std::min(x, hi));
      axis[s].push_back(hi);
    }
    Adversary xi(1, 2, 2);
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t a = 0; a < 2; ++a) xi.set(0, s, a, feasible_set(m, s, a).center());
    }
    for (double x0 : axis[0]) {
      for (double x1 : axis[1]) {
        xi.set(0, 0, pi.action(0, 0), std::vector<double>{x0, 1.0 - x0});
        xi.set(0, 1, pi.action(0, 1), std::vector<double>{x1, 1.0 - x1});
        best = std::max(best, realized(m, pi, xi, 1.0));
      }
    }
    CHECK(value >= best - 1e-9);
    CHECK(value <= best + 1e-4);
  }
}

TEST_CASE("report fields are consistent") {
  ts::Rng rng(66);
  for (int i = 0; i < 20; ++i) {
    const auto m = ts::random_model(rng, 3, 2, 3, ts::uniform(rng, 0.2, 2.0));
    const auto pi = ts::random_deterministic_policy(rng, m);
    const auto rep = evaluate_policy(m, pi);
    CHECK(rep.combined_value == doctest::Approx(rep.cost_under_combined + m.beta * rep.worst_case_entropy));
    CHECK(rep.cost_under_combined <= rep.cost_bound + 1e-9);
  }
}

TEST_CASE("raising beta trades cost for entropy") {
  ts::Rng rng(67);
  for (int i = 0; i < 30; ++i) {
    const auto m1 = ts::random_model(rng, 3, 3, 3, 1.0);
    auto m0 = m1;
    m0.beta = 0.0;
    const auto pi1 = solve(m1).policy;
    const auto pi0 = solve(m0).policy;
    CHECK(robust_eval_cost_only(m1, pi0).value <= robust_eval_cost_only(m1, pi1).value + 1e-9);
    // Combined objective at beta = 1: pi1 is optimal, so pi0 cannot do better.
    CHECK(robust_eval_combined(m1, pi1).value <= robust_eval_combined(m1, pi0).value + 1e-9);
  }
}
