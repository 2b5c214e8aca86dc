#include "imdp/entropy.hpp"

#include <cmath>
#include <stdexcept>

#include "imdp/errors.hpp"

namespace imdp {

double xlog2x(double x) {
  if (x < kEntropyFloor) return 0.0;
  return x * std::log2(x);
}

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) h -= xlog2x(x);
  return h;
}

double phi(std::span<const double> p, std::span<const double> v, double beta) {
  if (p.size() != v.size()) throw DimensionError("phi: length mismatch");
  double ent = 0.0;
  double lin = 0.0;
  for (std::size_t q = 0; q < p.size(); ++q) {
    if (p[q] < 0.0) throw std::invalid_argument("phi: negative probability");
    ent -= xlog2x(p[q]);
    lin += p[q] * v[q];
  }
  return beta * ent + lin;
}

namespace {

void check_chain(const InducedChain& chain) {
  const std::size_t ns = chain.num_states();
  if (chain.transition.size() != chain.horizon ||
      chain.terminal_cost.size() != ns ||
      chain.stage_cost.size() != ns * chain.n_actions) {
    throw DimensionError("induced chain has inconsistent dimensions");
  }
}

}  // namespace

CostRecursion cost_recursion(const InducedChain& chain, const Policy& pi) {
  check_chain(chain);
  if (pi.horizon() != chain.horizon) {
    throw DimensionError("cost_recursion: policy has " + std::to_string(pi.horizon()) +
                         " stages, chain has " + std::to_string(chain.horizon));
  }
  const std::size_t ns = chain.num_states();
  const std::size_t na = chain.n_actions;

  CostRecursion out;
  out.u.role = ValueRole::Cost;
  out.u.stages.assign(chain.horizon + 1, std::vector<double>(ns, 0.0));
  out.u.stages[chain.horizon] = chain.terminal_cost;
  for (std::size_t k = chain.horizon; k-- > 0;) {
    const auto& next = out.u.stages[k + 1];
    for (std::size_t s = 0; s < ns; ++s) {
      const auto w = pi.row(k, s);
      double value = 0.0;
      for (std::size_t a = 0; a < na; ++a) value += w[a] * chain.stage_cost[s * na + a];
      const auto& p = chain.transition[k][s];
      for (std::size_t q = 0; q < ns; ++q) value += p[q] * next[q];
      out.u.stages[k][s] = value;
    }
  }
  for (std::size_t s = 0; s < ns; ++s) out.expected_cost += chain.alpha[s] * out.u.stages[0][s];
  return out;
}

EntropyRecursion entropy_recursion(const InducedChain& chain) {
  check_chain(chain);
  const std::size_t ns = chain.num_states();
  EntropyRecursion out;
  out.w.role = ValueRole::Entropy;
  out.w.stages.assign(chain.horizon + 1, std::vector<double>(ns, 0.0));
  for (std::size_t k = chain.horizon; k-- > 0;) {
    for (std::size_t s = 0; s < ns; ++s) {
      out.w.stages[k][s] = phi(chain.transition[k][s], out.w.stages[k + 1], 1.0);
    }
  }
  out.entropy = phi(chain.alpha, out.w.stages[0], 1.0);
  return out;
}

namespace {

// Depth-first walk over paths, accumulating -p log2 p at the leaves.
void enumerate_paths(const InducedChain& chain, std::size_t k, std::size_t s,
                     double prob, double& acc) {
  if (k == chain.horizon) {
    acc -= xlog2x(prob);
    return;
  }
  const auto& row = chain.transition[k][s];
  for (std::size_t q = 0; q < row.size(); ++q) {
    const double next = prob * row[q];
    if (next <= 0.0) continue;
    enumerate_paths(chain, k + 1, q, next, acc);
  }
}

}  // namespace

double path_entropy_direct(const InducedChain& chain) {
  check_chain(chain);
  const double paths =
      std::pow(static_cast<double>(chain.num_states()), static_cast<double>(chain.horizon + 1));
  if (paths > kPathEnumerationBudget) {
    throw BudgetExceeded("path enumeration needs " + std::to_string(paths) +
                         " paths, budget is 1e6");
  }
  double acc = 0.0;
  for (std::size_t s = 0; s < chain.num_states(); ++s) {
    if (chain.alpha[s] > 0.0) enumerate_paths(chain, 0, s, chain.alpha[s], acc);
  }
  return acc;
}

}  // namespace imdp
