#include "imdp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "imdp/entropy.hpp"
#include "imdp/errors.hpp"
#include "imdp/parallel.hpp"
#include "imdp/rng.hpp"

namespace imdp {

TrajectoryBatch simulate(const ImdpModel& model, const Policy& pi, const Adversary& xi,
                         std::size_t n_paths, std::uint64_t seed) {
  if (n_paths == 0) throw std::invalid_argument("simulate: n_paths must be positive");
  const InducedChain chain = induce_chain(model, pi, xi);
  const std::size_t h = model.horizon;

  TrajectoryBatch batch;
  batch.seed = seed;
  batch.horizon = h;
  batch.beta = model.beta;
  batch.states.assign(n_paths, std::vector<std::size_t>(h + 1, 0));
  batch.actions.assign(n_paths, std::vector<std::size_t>(h, 0));
  batch.realized_costs.assign(n_paths, 0.0);
  batch.surprisals.assign(n_paths, 0.0);
  std::vector<std::vector<double>> stage_costs(n_paths, std::vector<double>(h + 1, 0.0));
  std::vector<std::vector<double>> stage_surprisal(n_paths, std::vector<double>(h + 1, 0.0));

  parallel_for(n_paths, [&](std::size_t i) {
    CounterRng rng(seed, i);
    auto& xs = batch.states[i];
    auto& as = batch.actions[i];
    xs[0] = rng.categorical(model.alpha);
    stage_surprisal[i][0] = -std::log2(model.alpha[xs[0]]);
    for (std::size_t k = 0; k < h; ++k) {
      const std::size_t s = xs[k];
      as[k] = rng.categorical(pi.row(k, s));
      stage_costs[i][k] = model.cost(s, as[k]);
      xs[k + 1] = rng.categorical(xi.dist(k, s, as[k]));
      stage_surprisal[i][k + 1] = -std::log2(chain.transition[k][s][xs[k + 1]]);
    }
    stage_costs[i][h] = model.terminal_cost[xs[h]];
    double cost = 0.0;
    double surprisal = 0.0;
    for (std::size_t k = 0; k <= h; ++k) {
      cost += stage_costs[i][k];
      surprisal += stage_surprisal[i][k];
    }
    batch.realized_costs[i] = cost;
    batch.surprisals[i] = surprisal;
  });

  // Per-stage aggregates. Prefixes are interned as (parent id, state) pairs.
  batch.mean_cumulative_cost.assign(h + 1, 0.0);
  batch.mean_surprisal.assign(h + 1, 0.0);
  batch.empirical_entropy.assign(h + 1, 0.0);
  std::vector<double> cum_cost(n_paths, 0.0);
  std::vector<double> cum_surprisal(n_paths, 0.0);
  std::vector<std::size_t> prefix_id(n_paths, 0);
  const double n = static_cast<double>(n_paths);
  for (std::size_t k = 0; k <= h; ++k) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> intern;
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t i = 0; i < n_paths; ++i) {
      cum_cost[i] += stage_costs[i][k];
      cum_surprisal[i] += stage_surprisal[i][k];
      batch.mean_cumulative_cost[k] += cum_cost[i];
      batch.mean_surprisal[k] += cum_surprisal[i];
      const auto key = std::make_pair(prefix_id[i], batch.states[i][k]);
      const auto [it, inserted] = intern.emplace(key, intern.size());
      prefix_id[i] = it->second;
      ++counts[prefix_id[i]];
    }
    batch.mean_cumulative_cost[k] /= n;
    batch.mean_surprisal[k] /= n;
    double ent = 0.0;
    for (const auto& [id, c] : counts) ent -= xlog2x(static_cast<double>(c) / n);
    batch.empirical_entropy[k] = ent;
  }
  return batch;
}

double empirical_entropy(const TrajectoryBatch& batch) {
  if (batch.size() == 0) throw std::invalid_argument("empirical_entropy: empty batch");
  std::map<std::vector<std::size_t>, std::size_t> counts;
  for (const auto& path : batch.states) ++counts[path];
  const double n = static_cast<double>(batch.size());
  double ent = 0.0;
  for (const auto& [path, c] : counts) ent -= xlog2x(static_cast<double>(c) / n);
  return ent;
}

CombinedStatistic combined_statistic(const TrajectoryBatch& batch, double beta) {
  const std::size_t n = batch.size();
  if (n == 0) throw std::invalid_argument("combined_statistic: empty batch");
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += batch.realized_costs[i] + beta * batch.surprisals[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = batch.realized_costs[i] + beta * batch.surprisals[i] - mean;
    var += d * d;
  }
  CombinedStatistic out;
  out.mean = mean;
  if (n > 1) {
    var /= static_cast<double>(n - 1);
    out.standard_error = std::sqrt(var / static_cast<double>(n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random policies and adversaries

Policy random_policy(const ImdpModel& model, std::uint64_t seed) {
  model.check_shape();
  CounterRng rng(seed);
  const std::size_t na = model.num_actions();
  std::vector<std::vector<std::vector<double>>> probs(
      model.horizon, std::vector<std::vector<double>>(model.num_states()));
  for (auto& stage : probs) {
    for (auto& row : stage) {
      // Normalized exponentials are uniform on the simplex.
      row.resize(na);
      double total = 0.0;
      for (auto& x : row) {
        x = -std::log(rng.uniform_open0());
        total += x;
      }
      for (auto& x : row) x /= total;
      double sum = 0.0;
      for (std::size_t a = 0; a + 1 < na; ++a) sum += row[a];
      row[na - 1] = std::max(0.0, 1.0 - sum);
    }
  }
  return Policy::stochastic(probs);
}

std::vector<double> sample_feasible(const FeasibleSet& box, CounterRng& rng, int steps) {
  std::vector<double> x = box.center();
  std::vector<std::size_t> free_idx;
  for (std::size_t q = 0; q < box.size(); ++q) {
    if (box.upper[q] > box.lower[q]) free_idx.push_back(q);
  }
  if (free_idx.size() < 2) return x;
  std::vector<double> d(box.size(), 0.0);
  for (int step = 0; step < steps; ++step) {
    double mean = 0.0;
    for (auto q : free_idx) {
      d[q] = rng.normal();
      mean += d[q];
    }
    mean /= static_cast<double>(free_idx.size());
    for (auto q : free_idx) d[q] -= mean;
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    for (auto q : free_idx) {
      if (d[q] > 0.0) {
        t_lo = std::max(t_lo, (box.lower[q] - x[q]) / d[q]);
        t_hi = std::min(t_hi, (box.upper[q] - x[q]) / d[q]);
      } else if (d[q] < 0.0) {
        t_lo = std::max(t_lo, (box.upper[q] - x[q]) / d[q]);
        t_hi = std::min(t_hi, (box.lower[q] - x[q]) / d[q]);
      }
    }
    const double u = rng.uniform();
    if (!(t_hi > t_lo)) continue;  // chord degenerates at a vertex
    const double t = t_lo + u * (t_hi - t_lo);
    for (auto q : free_idx) x[q] = std::clamp(x[q] + t * d[q], box.lower[q], box.upper[q]);
  }
  return box.project(x);
}

Adversary random_adversary(const ImdpModel& model, std::uint64_t seed) {
  require_valid(model);
  CounterRng rng(seed);
  Adversary xi(model.horizon, model.num_states(), model.num_actions());
  for (std::size_t k = 0; k < model.horizon; ++k) {
    for (std::size_t s = 0; s < model.num_states(); ++s) {
      for (std::size_t a = 0; a < model.num_actions(); ++a) {
        xi.set(k, s, a, sample_feasible(feasible_set(model, s, a), rng));
      }
    }
  }
  return xi;
}

// ---------------------------------------------------------------------------
// CSV

void write_trajectory_csv(std::ostream& os, const ImdpModel& model,
                          const TrajectoryBatch& batch) {
  const auto old_precision = os.precision(10);
  os << "path,stage,state,state_label,action,action_label,stage_cost,cumulative_cost\n";
  for (std::size_t i = 0; i < batch.size(); ++i) {
    double cum = 0.0;
    for (std::size_t k = 0; k <= batch.horizon; ++k) {
      const std::size_t s = batch.states[i][k];
      os << i << ',' << k << ',' << s << ',' << model.states[s] << ',';
      double c = 0.0;
      if (k < batch.horizon) {
        const std::size_t a = batch.actions[i][k];
        c = model.cost(s, a);
        os << a << ',' << model.actions[a] << ',';
      } else {
        c = model.terminal_cost[s];
        os << ",,";
      }
      cum += c;
      os << c << ',' << cum << '\n';
    }
  }
  os.precision(old_precision);
}

void write_summary_csv(std::ostream& os, const TrajectoryBatch& batch) {
  const auto old_precision = os.precision(10);
  os << "stage,mean_cumulative_cost,empirical_entropy,mean_surprisal,mean_combined\n";
  for (std::size_t k = 0; k <= batch.horizon; ++k) {
    os << k << ',' << batch.mean_cumulative_cost[k] << ',' << batch.empirical_entropy[k]
       << ',' << batch.mean_surprisal[k] << ','
       << batch.mean_cumulative_cost[k] + batch.beta * batch.mean_surprisal[k] << '\n';
  }
  os.precision(old_precision);
}

}  // namespace imdp
