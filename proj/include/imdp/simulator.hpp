#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "imdp/model.hpp"

namespace imdp {

/// Seeded sample paths of an IMDP under a fixed (policy, adversary) pair.
struct TrajectoryBatch {
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  double beta = 1.0;
  std::vector<std::vector<std::size_t>> states;   // [path][0..h]
  std::vector<std::vector<std::size_t>> actions;  // [path][0..h-1]
  /// sum_{k<h} c(X_k, a_k) + c_h(X_h) per path.
  std::vector<double> realized_costs;
  /// -log2 of the path probability under the induced chain. Its mean is an
  /// unbiased estimate of the joint path entropy.
  std::vector<double> surprisals;

  // Per-stage aggregates, index k = 0..h.
  std::vector<double> mean_cumulative_cost;  // cost accrued at stages 0..k
  std::vector<double> empirical_entropy;     // plug-in entropy of (X_0..X_k)
  std::vector<double> mean_surprisal;        // mean -log2 Prob[X_0..X_k]

  std::size_t size() const { return states.size(); }
};

/// Samples X_0 ~ alpha, a_k ~ pi_k(X_k), X_{k+1} ~ xi_k^{a_k}(X_k). Path i
/// draws from CounterRng(seed, i), so results do not depend on threading.
TrajectoryBatch simulate(const ImdpModel& model, const Policy& pi, const Adversary& xi,
                         std::size_t n_paths, std::uint64_t seed);

/// Plug-in entropy (bits) of the observed full-path frequencies. Biased low
/// when the number of distinct paths is comparable to the sample size.
double empirical_entropy(const TrajectoryBatch& batch);

/// Per-path realized cost + beta * surprisal, with its mean and standard
/// error.
struct CombinedStatistic {
  double mean = 0.0;
  double standard_error = 0.0;
};
CombinedStatistic combined_statistic(const TrajectoryBatch& batch, double beta);

/// Stochastic policy with every row uniform on the action simplex.
Policy random_policy(const ImdpModel& model, std::uint64_t seed);

/// Adversary with every vector drawn by hit-and-run (100 steps from the
/// center point) inside its feasible set.
Adversary random_adversary(const ImdpModel& model, std::uint64_t seed);

class CounterRng;

/// One hit-and-run sample from the box intersected with the simplex.
std::vector<double> sample_feasible(const FeasibleSet& box, CounterRng& rng,
                                    int steps = 100);

/// Long-format trajectory CSV, one row per (path, stage):
/// path,stage,state,state_label,action,action_label,stage_cost,cumulative_cost
/// At stage h the action columns are empty and stage_cost is c_h.
void write_trajectory_csv(std::ostream& os, const ImdpModel& model,
                          const TrajectoryBatch& batch);

/// Per-stage summary CSV:
/// stage,mean_cumulative_cost,empirical_entropy,mean_surprisal,mean_combined
/// where mean_combined = mean_cumulative_cost + beta * mean_surprisal.
void write_summary_csv(std::ostream& os, const TrajectoryBatch& batch);

}  // namespace imdp
