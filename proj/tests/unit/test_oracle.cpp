#include "doctest.h"

#include "imdp/errors.hpp"
#include "imdp/gridworld.hpp"
#include "imdp/inner_solver.hpp"
#include "imdp/oracle.hpp"
#include "imdp/robust_eval.hpp"
#include "imdp/value_iteration.hpp"
#include "support.hpp"

using namespace imdp;
namespace ts = testing_support;

TEST_CASE("degenerate box returns its only point") {
  const FeasibleSet box{{0.2, 0.5, 0.3}, {0.2, 0.5, 0.3}};
  const auto g = grid_inner_oracle(box, std::vector<double>{1, 2, 3}, 0.0, 1.0, 1e-2);
  CHECK(g.p_best[0] == doctest::Approx(0.2));
  CHECK(g.p_best[1] == doctest::Approx(0.5));
  CHECK(g.p_best[2] == doctest::Approx(0.3));
}

TEST_CASE("two-state entropy grid approaches one bit") {
  const FeasibleSet box{{0.0, 0.0}, {1.0, 1.0}};
  const std::vector<double> v{0.0, 0.0};
  double prev = 0.0;
  for (double res : {0.3, 0.07, 1e-2, 1e-3}) {
    const double value = grid_inner_oracle(box, v, 0.0, 1.0, res, 0.0).value;
    CHECK(value >= prev - 1e-15);
    CHECK(value <= 1.0 + 1e-15);
    prev = value;
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("grid value is monotone over nested resolutions and stays below the solver") {
  ts::Rng rng(81);
  for (int i = 0; i < 15; ++i) {
    const auto box = ts::random_box(rng, 3);
    const auto v = ts::random_values(rng, 3, 2.0);
    const double beta = ts::uniform(rng, 0.0, 2.0);
    const double solver = solve_inner(box, v, 0.0, beta).value;
    double prev = -1e300;
    for (double res : {1e-2, 1e-3, 1e-4}) {
      const double g = grid_inner_oracle(box, v, 0.0, beta, res, 0.0).value;
      CHECK(g >= prev - 1e-12);
      CHECK(g <= solver + 1e-9);
      prev = g;
    }
  }
}

TEST_CASE("grid search agrees with the solver on random instances") {
  ts::Rng rng(82);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = ts::pick(rng, 1, 4);
    const auto box = ts::random_box(rng, n);
    const auto v = ts::random_values(rng, n, 2.0);
    const double beta = ts::uniform(rng) < 0.2 ? 0.0 : ts::uniform(rng, 0.05, 2.0);
    const double solver = solve_inner(box, v, 0.0, beta).value;
    const double g = grid_inner_oracle(box, v, 0.0, beta, 1e-2, 1e-6).value;
    CHECK(solver >= g - 1e-9);
    CHECK(solver <= g + 1e-5);
  }
}

TEST_CASE("guards") {
  const FeasibleSet five{std::vector<double>(5, 0.0), std::vector<double>(5, 1.0)};
  CHECK_THROWS_AS(grid_inner_oracle(five, std::vector<double>(5, 0.0), 0.0, 1.0, 1e-2),
                  BudgetExceeded);
  const FeasibleSet two{{0.0, 0.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(grid_inner_oracle(two, std::vector<double>(2, 0.0), 0.0, 1.0, 1e-5),
                  BudgetExceeded);
  CHECK_THROWS_AS(exhaustive_policy_oracle(gridworld::build_gridworld(1.0)), BudgetExceeded);
}

TEST_CASE("exhaustive search: single action and recomputation") {
  ts::Rng rng(83);
  const auto one = ts::random_model(rng, 3, 1, 3, 1.0);
  const auto o1 = exhaustive_policy_oracle(one);
  CHECK(o1.policies_evaluated == 1);
  CHECK(o1.value == robust_eval_combined(one, ts::single_action_policy(3, 3)).value);

  for (int i = 0; i < 10; ++i) {
    const auto m = ts::random_model(rng, 2, 2, 2, 1.0);
    const auto o = exhaustive_policy_oracle(m);
    CHECK(o.policies_evaluated == 16);
    CHECK(robust_eval_combined(m, o.best_policy).value == o.value);
    CHECK(std::abs(solve(m).j_bar_star - o.value) <= 1e-6);
  }
}
