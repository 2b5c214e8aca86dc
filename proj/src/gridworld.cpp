#include "imdp/gridworld.hpp"

#include <array>
#include <filesystem>
#include <fstream>

#include "imdp/errors.hpp"
#include "imdp/io.hpp"

namespace imdp::gridworld {

std::size_t GridState::pack() const {
  return static_cast<std::size_t>((robot_a - 1) * 4 + weed_1 * 2 + weed_2);
}

GridState GridState::unpack(std::size_t index) {
  if (index >= kStates) throw DimensionError("grid state index out of range");
  const int i = static_cast<int>(index);
  return GridState{i / 4 + 1, (i / 2) % 2, i % 2};
}

std::string GridState::label() const {
  return "A" + std::to_string(robot_a) + "w" + std::to_string(weed_1) + std::to_string(weed_2);
}

int next_quadrant(int quadrant) { return quadrant % 4 + 1; }

namespace {

// Interval marginal over a small outcome set: {outcome, lower, upper}.
struct Outcome {
  int value;
  double lower;
  double upper;
};

std::vector<Outcome> weed_marginal(int weed, bool cleared) {
  if (cleared) return {{0, 1.0, 1.0}};
  if (weed == 1) return {{1, 1.0, 1.0}};
  return {{0, 1.0 - kWeedUpper, 1.0 - kWeedLower}, {1, kWeedLower, kWeedUpper}};
}

std::vector<Outcome> robot_marginal(int quadrant, int blocked) {
  const int next = next_quadrant(quadrant);
  if (blocked != next) return {{next, 1.0, 1.0}};
  std::vector<Outcome> out;
  for (int q = 1; q <= 4; ++q) out.push_back({q, kEvadeLower, kEvadeUpper});
  return out;
}

}  // namespace

ImdpModel build_gridworld(double beta) {
  ImdpModel m = ImdpModel::with_shape(kStates, kQuadrants, kHorizon, beta);
  for (std::size_t s = 0; s < kStates; ++s) m.states[s] = GridState::unpack(s).label();
  for (std::size_t a = 0; a < kQuadrants; ++a) m.actions[a] = "B" + std::to_string(a + 1);

  for (std::size_t s = 0; s < kStates; ++s) {
    const GridState g = GridState::unpack(s);
    m.terminal_cost[s] = g.infected();
    for (std::size_t a = 0; a < kQuadrants; ++a) {
      const int target = static_cast<int>(a) + 1;
      m.cost(s, a) = g.infected();
      for (const auto& r : robot_marginal(g.robot_a, target)) {
        for (const auto& w1 : weed_marginal(g.weed_1, target == 1)) {
          for (const auto& w2 : weed_marginal(g.weed_2, target == 2)) {
            const std::size_t q = GridState{r.value, w1.value, w2.value}.pack();
            m.lower(s, a, q) = r.lower * w1.lower * w2.lower;
            m.upper(s, a, q) = r.upper * w1.upper * w2.upper;
          }
        }
      }
    }
  }
  m.alpha[GridState{1, 0, 0}.pack()] = 1.0;
  return m;
}

std::vector<int> robot_a_track(const std::vector<std::size_t>& states) {
  std::vector<int> out;
  out.reserve(states.size());
  for (auto s : states) out.push_back(GridState::unpack(s).robot_a);
  return out;
}

bool is_clockwise(const std::vector<std::size_t>& states) {
  const auto track = robot_a_track(states);
  for (std::size_t k = 0; k + 1 < track.size(); ++k) {
    if (track[k + 1] != next_quadrant(track[k])) return false;
  }
  return true;
}

ExperimentReport run_experiment(std::uint64_t seed) {
  ExperimentReport out;
  out.seed = seed;
  const ImdpModel reg = build_gridworld(1.0);
  const ImdpModel unreg = build_gridworld(0.0);

  auto run = [&](const ImdpModel& model, std::uint64_t stream) {
    BetaRun r;
    r.beta = model.beta;
    r.solution = solve(model);
    r.report = evaluate_policy(reg, r.solution.policy);
    r.showcase = simulate(model, r.solution.policy, r.solution.adversary, kShowcasePaths,
                          seed + stream);
    return r;
  };
  out.regularized = run(reg, 0);
  out.unregularized = run(unreg, 1);

  const auto& pi = out.regularized.solution.policy;
  out.worst_case_paths =
      simulate(reg, pi, out.regularized.solution.adversary, kComparisonPaths, seed + 2);
  const Adversary random_xi = random_adversary(reg, seed + 3);
  out.random_adv_paths = simulate(reg, pi, random_xi, kComparisonPaths, seed + 4);
  out.random_adv_statistic = combined_statistic(out.random_adv_paths, 1.0);
  out.random_pair_paths = simulate(reg, random_policy(reg, seed + 5),
                                   random_adversary(reg, seed + 6), kComparisonPaths, seed + 7);
  return out;
}

void write_experiment(const ExperimentReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path root(dir);
  auto open = [&](const std::string& name) {
    std::ofstream os(root / name);
    if (!os) throw ImdpError("cannot write " + (root / name).string());
    return os;
  };
  const ImdpModel reg = build_gridworld(1.0);
  const ImdpModel unreg = build_gridworld(0.0);
  for (const auto* run : {&report.regularized, &report.unregularized}) {
    const std::string tag = run->beta > 0.0 ? "beta1" : "beta0";
    const ImdpModel& model = run->beta > 0.0 ? reg : unreg;
    open("model_" + tag + ".json") << model_to_json(model).dump(2) << '\n';
    open("solve_" + tag + ".json") << solve_result_to_json(run->solution, false).dump(2) << '\n';
    auto traj = open("showcase_" + tag + ".csv");
    write_trajectory_csv(traj, model, run->showcase);
  }
  const std::array<std::pair<const char*, const TrajectoryBatch*>, 3> batches{{
      {"worst_case", &report.worst_case_paths},
      {"random_adversary", &report.random_adv_paths},
      {"random_pair", &report.random_pair_paths},
  }};
  for (const auto& [name, batch] : batches) {
    auto summary = open(std::string("summary_") + name + ".csv");
    write_summary_csv(summary, *batch);
  }
  open("summary.json") << experiment_summary_json(report).dump(2) << '\n';
}

}  // namespace imdp::gridworld
