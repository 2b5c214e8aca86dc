#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "imdp/model.hpp"

namespace testing_support {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<double> random_distribution(Rng& rng, std::size_t n, double zero_prob = 0.0) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) {
    x = uniform(rng) < zero_prob ? 0.0 : -std::log(uniform(rng, 1e-12, 1.0));
    sum += x;
  }
  if (sum == 0.0) {
    p[pick(rng, 0, n - 1)] = 1.0;
    return p;
  }
  for (auto& x : p) x /= sum;
  return p;
}

// Box around a random distribution; some components pinned, some loose.
inline imdp::FeasibleSet random_box(Rng& rng, std::size_t n) {
  const auto c = random_distribution(rng, n, 0.15);
  imdp::FeasibleSet box;
  for (std::size_t q = 0; q < n; ++q) {
    const double r = uniform(rng);
    if (r < 0.1) {
      box.lower.push_back(c[q]);
      box.upper.push_back(c[q]);
    } else if (r < 0.2) {
      box.lower.push_back(0.0);
      box.upper.push_back(1.0);
    } else {
      box.lower.push_back(c[q] * uniform(rng));
      box.upper.push_back(std::min(1.0, c[q] + uniform(rng, 0.0, 0.6)));
    }
  }
  return box;
}

inline std::vector<double> random_values(Rng& rng, std::size_t n, double scale = 5.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, -scale, scale);
  return v;
}

inline imdp::ImdpModel random_model(Rng& rng, std::size_t ns, std::size_t na, std::size_t h,
                                    double beta) {
  auto m = imdp::ImdpModel::with_shape(ns, na, h, beta);
  m.alpha = random_distribution(rng, ns, 0.3);
  for (std::size_t s = 0; s < ns; ++s) {
    m.terminal_cost[s] = uniform(rng, 0.0, 3.0);
    for (std::size_t a = 0; a < na; ++a) {
      m.cost(s, a) = uniform(rng, 0.0, 3.0);
      const auto box = random_box(rng, ns);
      for (std::size_t q = 0; q < ns; ++q) {
        m.lower(s, a, q) = box.lower[q];
        m.upper(s, a, q) = box.upper[q];
      }
    }
  }
  return m;
}

// Lower = upper = a random stochastic row everywhere.
inline imdp::ImdpModel degenerate_model(Rng& rng, std::size_t ns, std::size_t na, std::size_t h,
                                        double beta) {
  auto m = random_model(rng, ns, na, h, beta);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      const auto p = random_distribution(rng, ns, 0.3);
      for (std::size_t q = 0; q < ns; ++q) m.lower(s, a, q) = m.upper(s, a, q) = p[q];
    }
  }
  return m;
}

inline imdp::Policy random_deterministic_policy(Rng& rng, const imdp::ImdpModel& m) {
  std::vector<std::vector<std::size_t>> table(m.horizon,
                                              std::vector<std::size_t>(m.num_states()));
  for (auto& stage : table) {
    for (auto& a : stage) a = pick(rng, 0, m.num_actions() - 1);
  }
  return imdp::Policy::deterministic(table, m.num_actions());
}

inline imdp::Policy random_stochastic_policy(Rng& rng, const imdp::ImdpModel& m) {
  std::vector<std::vector<std::vector<double>>> probs(m.horizon);
  for (auto& stage : probs) {
    for (std::size_t s = 0; s < m.num_states(); ++s) {
      stage.push_back(random_distribution(rng, m.num_actions(), 0.2));
    }
  }
  return imdp::Policy::stochastic(probs);
}

// Adversary choosing a random point of every feasible set (projection of a
// random distribution, so not uniform, but always feasible).
inline imdp::Adversary random_feasible_adversary(Rng& rng, const imdp::ImdpModel& m) {
  imdp::Adversary xi(m.horizon, m.num_states(), m.num_actions());
  for (std::size_t k = 0; k < m.horizon; ++k) {
    for (std::size_t s = 0; s < m.num_states(); ++s) {
      for (std::size_t a = 0; a < m.num_actions(); ++a) {
        const auto box = imdp::feasible_set(m, s, a);
        xi.set(k, s, a, box.project(random_distribution(rng, m.num_states())));
      }
    }
  }
  return xi;
}

// Free-standing chain: random alpha and transitions, no model behind it.
inline imdp::InducedChain random_chain(Rng& rng, std::size_t ns, std::size_t h,
                                       double zero_prob = 0.3) {
  imdp::InducedChain c;
  c.alpha = random_distribution(rng, ns, zero_prob);
  c.n_actions = 1;
  c.horizon = h;
  c.stage_cost.resize(ns);
  c.terminal_cost.resize(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    c.stage_cost[s] = uniform(rng, 0.0, 2.0);
    c.terminal_cost[s] = uniform(rng, 0.0, 2.0);
  }
  c.transition.assign(h, {});
  for (auto& stage : c.transition) {
    for (std::size_t s = 0; s < ns; ++s) stage.push_back(random_distribution(rng, ns, zero_prob));
  }
  return c;
}

inline imdp::Policy single_action_policy(std::size_t h, std::size_t ns) {
  return imdp::Policy::deterministic(
      std::vector<std::vector<std::size_t>>(h, std::vector<std::size_t>(ns, 0)), 1);
}

}  // namespace testing_support
