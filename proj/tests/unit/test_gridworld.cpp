#include "doctest.h"

#include "imdp/gridworld.hpp"

using namespace imdp;
using namespace imdp::gridworld;

TEST_CASE("state packing is a bijection") {
  for (std::size_t i = 0; i < kStates; ++i) CHECK(GridState::unpack(i).pack() == i);
  CHECK(GridState{1, 0, 0}.pack() == 0);
  CHECK(GridState{4, 1, 1}.pack() == 15);
  CHECK(GridState{3, 1, 0}.label() == "A3w10");
  CHECK(next_quadrant(4) == 1);
}

TEST_CASE("model shape and costs") {
  const auto m = build_gridworld(1.0);
  CHECK(validate_model(m).ok());
  CHECK(m.num_states() == 16);
  CHECK(m.num_actions() == 4);
  CHECK(m.horizon == 8);
  CHECK(m.alpha[GridState{1, 0, 0}.pack()] == 1.0);
  for (std::size_t a = 0; a < 4; ++a) {
    CHECK(m.cost(GridState{3, 1, 1}.pack(), a) == 2.0);
    CHECK(m.cost(GridState{2, 1, 0}.pack(), a) == 1.0);
    for (int q = 1; q <= 4; ++q) CHECK(m.cost(GridState{q, 0, 0}.pack(), a) == 0.0);
  }
  for (std::size_t s = 0; s < 16; ++s) CHECK(m.terminal_cost[s] == m.cost(s, 0));
}

TEST_CASE("unblocked robot moves deterministically") {
  const auto m = build_gridworld(0.0);
  for (std::size_t s = 0; s < kStates; ++s) {
    const GridState g = GridState::unpack(s);
    for (std::size_t a = 0; a < kQuadrants; ++a) {
      if (static_cast<int>(a) + 1 == next_quadrant(g.robot_a)) continue;
      double mass_on_next = 0.0;
      for (std::size_t q = 0; q < kStates; ++q) {
        if (GridState::unpack(q).robot_a == next_quadrant(g.robot_a)) {
          mass_on_next += m.lower(s, a, q);
        } else {
          CHECK(m.upper(s, a, q) == 0.0);
        }
      }
      // Weeds present or cleared are fixed; only fresh growth is uncertain.
      if ((g.weed_1 == 1 || a == 0) && (g.weed_2 == 1 || a == 1)) {
        CHECK(mass_on_next == doctest::Approx(1.0));
      }
    }
  }
}

TEST_CASE("weeds persist until cleared") {
  const auto m = build_gridworld(1.0);
  const std::size_t s = GridState{3, 1, 1}.pack();
  // Clearing quadrant 1: weed_1 goes to zero, weed_2 stays.
  CHECK(m.lower(s, 0, GridState{4, 0, 1}.pack()) == 1.0);
  // Working in the east leaves both weeds.
  CHECK(m.lower(s, 2, GridState{4, 1, 1}.pack()) == 1.0);
}
