#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "imdp/model.hpp"
#include "imdp/robust_eval.hpp"
#include "imdp/simulator.hpp"
#include "imdp/value_iteration.hpp"

namespace imdp::gridworld {

// 2x2 field. Robot A patrols the quadrants 1 -> 2 -> 3 -> 4 -> 1; quadrants
// 1 and 2 (west) can grow weeds. Each action picks the quadrant robot B
// works on: weeds there are removed, and if it is the quadrant robot A
// enters next, A swerves and may land anywhere.

inline constexpr std::size_t kQuadrants = 4;
inline constexpr std::size_t kStates = 16;
inline constexpr std::size_t kHorizon = 8;

inline constexpr double kWeedLower = 0.05;
inline constexpr double kWeedUpper = 0.5;
inline constexpr double kEvadeLower = 0.0;
inline constexpr double kEvadeUpper = 0.8;

struct GridState {
  int robot_a = 1;  // quadrant 1..4
  int weed_1 = 0;   // 0 or 1
  int weed_2 = 0;

  /// (robot_a - 1) * 4 + weed_1 * 2 + weed_2
  std::size_t pack() const;
  static GridState unpack(std::size_t index);
  int infected() const { return weed_1 + weed_2; }
  std::string label() const;

  friend bool operator==(const GridState&, const GridState&) = default;
};

/// Quadrant robot A moves to when unobstructed.
int next_quadrant(int quadrant);

ImdpModel build_gridworld(double beta);

/// Robot A quadrant sequence of a path.
std::vector<int> robot_a_track(const std::vector<std::size_t>& states);

/// True if every step follows the patrol cycle.
bool is_clockwise(const std::vector<std::size_t>& states);

struct BetaRun {
  double beta = 0.0;
  SolveResult solution;
  PolicyReport report;  // both policies are evaluated on the beta = 1 model
  TrajectoryBatch showcase;  // 10 paths under (pi*, xi*)
};

struct ExperimentReport {
  std::uint64_t seed = 0;
  BetaRun regularized;    // beta = 1
  BetaRun unregularized;  // beta = 0
  TrajectoryBatch worst_case_paths;   // (pi*_1, xi*_1), 1000 paths
  TrajectoryBatch random_adv_paths;   // (pi*_1, random xi), 1000 paths
  TrajectoryBatch random_pair_paths;  // (random pi, random xi), 1000 paths
  CombinedStatistic random_adv_statistic;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr std::size_t kShowcasePaths = 10;
inline constexpr std::size_t kComparisonPaths = 1000;

ExperimentReport run_experiment(std::uint64_t seed = kDefaultSeed);

/// Writes model_beta{1,0}.json, solve_beta{1,0}.json, trajectories and
/// summaries as CSV, and summary.json into `dir` (created if missing).
void write_experiment(const ExperimentReport& report, const std::string& dir);

}  // namespace imdp::gridworld
