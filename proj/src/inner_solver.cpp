#include "imdp/inner_solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>

#include "imdp/entropy.hpp"
#include "imdp/errors.hpp"

namespace imdp {

namespace {

constexpr double kLog2e = std::numbers::log2e;

double sum_of(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }

// Moves mass so that x sums to one: first proportionally over `idx` (keeps
// the ratios that stationarity fixes), then greedily over `all_idx`.
void polish_sum(std::vector<double>& x, const FeasibleSet& box,
                const std::vector<std::size_t>& idx,
                const std::vector<std::size_t>& all_idx) {
  for (int pass = 0; pass < 2; ++pass) {
    const double gap = 1.0 - sum_of(x);
    if (gap == 0.0) return;
    double mass = 0.0;
    for (auto q : idx) mass += x[q];
    if (mass <= 0.0) break;
    for (auto q : idx) {
      x[q] = std::clamp(x[q] + gap * x[q] / mass, box.lower[q], box.upper[q]);
    }
  }
  double gap = 1.0 - sum_of(x);
  if (std::abs(gap) <= 1e-14) return;  // rounding; leave small components alone
  for (auto q : all_idx) {
    if (gap == 0.0) break;
    if (gap > 0.0) {
      const double step = std::min(gap, box.upper[q] - x[q]);
      if (step > 0.0) {
        x[q] += step;
        gap -= step;
      }
    } else {
      const double step = std::min(-gap, x[q] - box.lower[q]);
      if (step > 0.0) {
        x[q] -= step;
        gap += step;
      }
    }
  }
}

void fill_active_sets(const FeasibleSet& box, const std::vector<double>& p,
                      const std::vector<std::size_t>& variable,
                      InnerSolveDiagnostics& diag) {
  for (auto q : variable) {
    if (p[q] <= box.lower[q]) {
      diag.active_lower.push_back(q);
    } else if (p[q] >= box.upper[q]) {
      diag.active_upper.push_back(q);
    }
  }
}

InnerSolveResult solve_linear(const FeasibleSet& box, std::span<const double> v,
                              double stage_cost,
                              const std::vector<std::size_t>& variable) {
  InnerSolveResult out;
  out.p_star = box.lower;
  double remaining = 1.0 - sum_of(out.p_star);

  std::vector<std::size_t> order(variable);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  double nu = order.empty() ? 0.0 : v[order.front()];
  for (auto q : order) {
    if (remaining <= 0.0) break;
    const double step = std::min(remaining, box.upper[q] - box.lower[q]);
    out.p_star[q] += step;
    remaining -= step;
    nu = v[q];
  }
  out.diagnostics.nu_star = nu;
  out.diagnostics.residual = std::abs(sum_of(out.p_star) - 1.0);
  fill_active_sets(box, out.p_star, variable, out.diagnostics);
  out.value = stage_cost + phi(out.p_star, v, 0.0);
  return out;
}

}  // namespace

double stationarity(double p, double v, double beta) {
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  return -beta * std::log2(p) - beta * kLog2e + v;
}

InnerSolveResult solve_inner(const FeasibleSet& box, std::span<const double> v,
                             double stage_cost, double beta) {
  const std::size_t n = box.size();
  if (v.size() != n || box.upper.size() != n) {
    throw DimensionError("solve_inner: box and value vector lengths differ");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("solve_inner: beta must be finite and nonnegative");
  }
  if (!box.nonempty()) throw InfeasibleError("solve_inner: feasible set is empty");

  std::vector<std::size_t> variable;
  std::vector<std::size_t> all;
  for (std::size_t q = 0; q < n; ++q) {
    all.push_back(q);
    if (box.upper[q] > 0.0 && box.upper[q] > box.lower[q]) variable.push_back(q);
  }

  const double sum_lower = sum_of(box.lower);
  const double sum_upper = sum_of(box.upper);
  auto corner = [&](const std::vector<double>& bound, double total) {
    InnerSolveResult out;
    out.p_star = bound;
    for (auto& x : out.p_star) x /= total;
    out.diagnostics.residual = std::abs(sum_of(out.p_star) - 1.0);
    fill_active_sets(box, out.p_star, variable, out.diagnostics);
    out.diagnostics.nu_star = std::numeric_limits<double>::quiet_NaN();
    out.value = stage_cost + phi(out.p_star, v, beta);
    return out;
  };
  if (sum_lower >= 1.0) return corner(box.lower, sum_lower);
  if (sum_upper <= 1.0) return corner(box.upper, sum_upper);

  if (beta == 0.0) return solve_linear(box, v, stage_cost, variable);

  // Shifted exponents keep 2^x finite: u_q = (v_q - max v) / beta <= 0.
  double vmax = -std::numeric_limits<double>::infinity();
  for (auto q : variable) vmax = std::max(vmax, v[q]);
  std::vector<double> shifted(n, 0.0);
  double umin = 0.0;
  for (auto q : variable) {
    shifted[q] = (v[q] - vmax) / beta;
    umin = std::min(umin, shifted[q]);
  }

  std::vector<double> p = box.lower;
  for (std::size_t q = 0; q < n; ++q) {
    if (box.upper[q] <= 0.0) p[q] = 0.0;
  }
  auto excess = [&](double t) {
    double sum = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      if (box.upper[q] > 0.0 && box.upper[q] > box.lower[q]) {
        p[q] = std::clamp(std::exp2(shifted[q] - t - kLog2e), box.lower[q], box.upper[q]);
      }
      sum += p[q];
    }
    return sum - 1.0;
  };

  // excess(t) is continuous and nonincreasing in t.
  double lo = umin - 64.0;
  double hi = 64.0;
  for (int grow = 0; excess(lo) < 0.0; ++grow) {
    if (grow == 64) throw SolverError("solve_inner: dual bracket does not close from below");
    lo -= 2.0 * (hi - lo);
  }
  for (int grow = 0; excess(hi) > 0.0; ++grow) {
    if (grow == 64) throw SolverError("solve_inner: dual bracket does not close from above");
    hi += 2.0 * (hi - lo);
  }

  InnerSolveResult out;
  double t = 0.5 * (lo + hi);
  double f = excess(t);
  int it = 1;
  // A small excess alone is not enough: with the sum pinned by a clamped
  // component, tiny free components still need an accurate multiplier.
  auto done = [&] { return std::abs(f) <= kInnerSumTol && hi - lo <= 1e-12 * std::max(1.0, std::abs(t)); };
  for (; it < kInnerMaxIterations && !done(); ++it) {
    if (f > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // bracket collapsed to adjacent doubles
    t = mid;
    f = excess(t);
  }
  out.diagnostics.iterations = it;
  out.diagnostics.residual = std::abs(f);
  out.diagnostics.nu_star = vmax + beta * t;

  // Free at the final multiplier, judged by the unclamped formula so that a
  // component sitting on a bound only by rounding may still absorb residual.
  std::vector<std::size_t> free_idx;
  for (auto q : variable) {
    const double raw = std::exp2(shifted[q] - t - kLog2e);
    if (raw >= box.lower[q] * (1.0 - 1e-9) && raw <= box.upper[q] * (1.0 + 1e-9)) {
      free_idx.push_back(q);
    }
  }
  fill_active_sets(box, p, variable, out.diagnostics);
  polish_sum(p, box, free_idx, all);
  if (std::abs(sum_of(p) - 1.0) > kInnerSumTol) {
    throw SolverError("solve_inner: sum constraint not met after " + std::to_string(it) +
                      " iterations");
  }
  out.p_star = std::move(p);
  out.value = stage_cost + phi(out.p_star, v, beta);
  return out;
}

// ---------------------------------------------------------------------------
// Mixtures

FeasibleSet aggregated_box(std::span<const FeasibleSet> boxes,
                           std::span<const double> weights) {
  if (boxes.empty() || boxes.size() != weights.size()) {
    throw DimensionError("aggregated_box: boxes and weights differ in length");
  }
  const std::size_t n = boxes.front().size();
  FeasibleSet out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t a = 0; a < boxes.size(); ++a) {
    for (std::size_t q = 0; q < n; ++q) {
      out.lower[q] += weights[a] * boxes[a].lower[q];
      out.upper[q] += weights[a] * boxes[a].upper[q];
    }
  }
  return out;
}

namespace {

void check_mixture_args(std::span<const FeasibleSet> boxes, std::span<const double> weights) {
  if (boxes.empty() || boxes.size() != weights.size()) {
    throw DimensionError("mixture: boxes and weights differ in length");
  }
  const std::size_t n = boxes.front().size();
  double total = 0.0;
  for (std::size_t a = 0; a < boxes.size(); ++a) {
    if (boxes[a].size() != n) throw DimensionError("mixture: boxes differ in dimension");
    if (!(weights[a] >= 0.0)) throw ValidationError("mixture: negative weight");
    if (weights[a] > 0.0 && !boxes[a].nonempty()) {
      throw InfeasibleError("mixture: feasible set of action " + std::to_string(a) +
                            " is empty");
    }
    total += weights[a];
  }
  if (std::abs(total - 1.0) > kProbTol) throw ValidationError("mixture: weights do not sum to 1");
}

// Subset function g(T) = sum_a w_a min(upper_a(T), 1 - lower_a(E \ T)) over
// all bitmasks T of the ground set.
std::vector<double> mixture_rank_function(std::span<const FeasibleSet> boxes,
                                          std::span<const double> weights) {
  const std::size_t n = boxes.front().size();
  const std::size_t full = std::size_t{1} << n;
  std::vector<double> g(full, 0.0);
  std::vector<double> up(full, 0.0);
  std::vector<double> lo(full, 0.0);
  for (std::size_t a = 0; a < boxes.size(); ++a) {
    if (weights[a] <= 0.0) continue;
    for (std::size_t mask = 1; mask < full; ++mask) {
      const auto q = static_cast<std::size_t>(std::countr_zero(mask));
      const std::size_t rest = mask & (mask - 1);
      up[mask] = up[rest] + boxes[a].upper[q];
      lo[mask] = lo[rest] + boxes[a].lower[q];
    }
    const double lo_total = lo[full - 1];
    for (std::size_t mask = 1; mask < full; ++mask) {
      const double complement_lower = lo_total - lo[mask];
      g[mask] += weights[a] * std::min(up[mask], 1.0 - complement_lower);
    }
  }
  g[0] = 0.0;
  return g;
}

struct Decomposition {
  const std::vector<double>& g;
  std::span<const double> v;
  double beta;
  std::vector<double>& x;
  std::vector<double> subset_sum;

  void run(std::size_t ground, std::size_t contracted) {
    if (ground == 0) return;
    const double mass = std::max(0.0, g[ground | contracted] - g[contracted]);
    std::vector<std::size_t> idx;
    for (std::size_t q = 0; q < v.size(); ++q) {
      if (ground & (std::size_t{1} << q)) idx.push_back(q);
    }

    if (beta == 0.0) {
      // Edmonds' greedy vertex is optimal for a linear objective.
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
      std::size_t prefix = contracted;
      for (auto q : idx) {
        const std::size_t next = prefix | (std::size_t{1} << q);
        x[q] = g[next] - g[prefix];
        prefix = next;
      }
      return;
    }

    // Maximizer on the hyperplane x(ground) = mass alone.
    double vmax = -std::numeric_limits<double>::infinity();
    for (auto q : idx) vmax = std::max(vmax, v[q]);
    double z = 0.0;
    for (auto q : idx) {
      x[q] = std::exp2((v[q] - vmax) / beta);
      z += x[q];
    }
    for (auto q : idx) x[q] = mass > 0.0 ? mass * x[q] / z : 0.0;

    // Most violated tight set: maximal minimizer of g(T | C) - x(T).
    constexpr double kSlack = 1e-13;
    double best = 0.0;
    std::size_t best_set = 0;
    subset_sum[0] = 0.0;
    for (std::size_t t = (0 - ground) & ground; t != 0; t = (t - ground) & ground) {
      const auto q = static_cast<std::size_t>(std::countr_zero(t));
      subset_sum[t] = subset_sum[t & (t - 1)] + x[q];
      if (t == ground) break;
      const double val = g[t | contracted] - g[contracted] - subset_sum[t];
      if (val < best - kSlack ||
          (std::abs(val - best) <= kSlack && best < -kSlack &&
           std::popcount(t) > std::popcount(best_set))) {
        best = val;
        best_set = t;
      }
    }
    if (best >= -kSlack) return;
    run(best_set, contracted);
    run(ground & ~best_set, contracted | best_set);
  }
};

// Max flow on a dense graph (Edmonds-Karp). Graph sizes here are tiny.
double max_flow(std::vector<std::vector<double>>& cap, std::size_t src, std::size_t sink) {
  constexpr double kEps = 1e-15;
  const std::size_t n = cap.size();
  double total = 0.0;
  for (int round = 0; round < 10000; ++round) {
    std::vector<long> parent(n, -1);
    parent[src] = static_cast<long>(src);
    std::vector<std::size_t> queue{src};
    for (std::size_t head = 0; head < queue.size() && parent[sink] < 0; ++head) {
      const std::size_t u = queue[head];
      for (std::size_t w = 0; w < n; ++w) {
        if (parent[w] < 0 && cap[u][w] > kEps) {
          parent[w] = static_cast<long>(u);
          queue.push_back(w);
        }
      }
    }
    if (parent[sink] < 0) break;
    double push = std::numeric_limits<double>::infinity();
    for (std::size_t w = sink; w != src; w = static_cast<std::size_t>(parent[w])) {
      push = std::min(push, cap[static_cast<std::size_t>(parent[w])][w]);
    }
    for (std::size_t w = sink; w != src; w = static_cast<std::size_t>(parent[w])) {
      const auto u = static_cast<std::size_t>(parent[w]);
      cap[u][w] -= push;
      cap[w][u] += push;
    }
    total += push;
  }
  return total;
}

void clamp_and_fix(std::vector<double>& p, const FeasibleSet& box) {
  for (std::size_t q = 0; q < p.size(); ++q) p[q] = std::clamp(p[q], box.lower[q], box.upper[q]);
  std::vector<std::size_t> all(p.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  polish_sum(p, box, {}, all);
}

}  // namespace

std::vector<std::vector<double>> split_mixture(std::span<const FeasibleSet> boxes,
                                               std::span<const double> weights,
                                               std::span<const double> mixture) {
  check_mixture_args(boxes, weights);
  const std::size_t na = boxes.size();
  const std::size_t n = boxes.front().size();
  if (mixture.size() != n) throw DimensionError("split_mixture: mixture length mismatch");

  // Nodes: 0 = source, 1..na = actions, na+1..na+n = states, na+n+1 = sink.
  const std::size_t src = 0;
  const std::size_t sink = na + n + 1;
  std::vector<std::vector<double>> cap(sink + 1, std::vector<double>(sink + 1, 0.0));
  std::vector<std::vector<double>> y(na, std::vector<double>(n, 0.0));
  std::vector<double> column(mixture.begin(), mixture.end());
  double supply = 0.0;
  for (std::size_t a = 0; a < na; ++a) {
    if (weights[a] <= 0.0) continue;
    double row = weights[a];
    for (std::size_t q = 0; q < n; ++q) {
      y[a][q] = weights[a] * boxes[a].lower[q];
      row -= y[a][q];
      column[q] -= y[a][q];
      cap[1 + a][na + 1 + q] = weights[a] * (boxes[a].upper[q] - boxes[a].lower[q]);
    }
    cap[src][1 + a] = std::max(0.0, row);
    supply += cap[src][1 + a];
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (column[q] < -kProbTol) {
      throw InfeasibleError("split_mixture: component " + std::to_string(q) +
                            " is below the weighted lower bounds");
    }
    cap[na + 1 + q][sink] = std::max(0.0, column[q]);
  }
  const auto residual = cap;
  const double flow = max_flow(cap, src, sink);
  if (supply - flow > kProbTol) {
    throw InfeasibleError("split_mixture: point is outside the weighted Minkowski sum");
  }

  std::vector<std::vector<double>> out(na);
  for (std::size_t a = 0; a < na; ++a) {
    if (weights[a] <= 0.0) continue;
    out[a].resize(n);
    for (std::size_t q = 0; q < n; ++q) {
      const double sent = residual[1 + a][na + 1 + q] - cap[1 + a][na + 1 + q];
      out[a][q] = (y[a][q] + std::max(0.0, sent)) / weights[a];
    }
    clamp_and_fix(out[a], boxes[a]);
  }
  return out;
}

MixtureSolveResult solve_inner_mixture(std::span<const FeasibleSet> boxes,
                                       std::span<const double> weights,
                                       std::span<const double> v, double expected_cost,
                                       double beta) {
  check_mixture_args(boxes, weights);
  const std::size_t na = boxes.size();
  const std::size_t n = boxes.front().size();
  if (v.size() != n) throw DimensionError("mixture: value vector length mismatch");

  MixtureSolveResult out;
  out.components.resize(na);

  std::size_t support = 0;
  std::size_t only = 0;
  for (std::size_t a = 0; a < na; ++a) {
    if (weights[a] > 0.0) {
      ++support;
      only = a;
    }
  }

  if (support == 1) {
    out.components[only] = solve_inner(boxes[only], v, 0.0, beta).p_star;
  } else {
    if (n > kMaxMixtureStates) {
      throw BudgetExceeded("mixture solver enumerates subsets; " + std::to_string(n) +
                           " states exceed the limit of " +
                           std::to_string(kMaxMixtureStates));
    }
    const auto g = mixture_rank_function(boxes, weights);
    std::vector<double> x(n, 0.0);
    Decomposition dec{g, v, beta, x, std::vector<double>(g.size(), 0.0)};
    dec.run((std::size_t{1} << n) - 1, 0);
    auto parts = split_mixture(boxes, weights, x);
    for (std::size_t a = 0; a < na; ++a) {
      if (weights[a] > 0.0) out.components[a] = std::move(parts[a]);
    }
  }
  for (std::size_t a = 0; a < na; ++a) {
    if (weights[a] <= 0.0) out.components[a] = solve_inner(boxes[a], v, 0.0, beta).p_star;
  }

  out.mixture.assign(n, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    if (weights[a] <= 0.0) continue;
    for (std::size_t q = 0; q < n; ++q) out.mixture[q] += weights[a] * out.components[a][q];
  }
  out.value = expected_cost + phi(out.mixture, v, beta);
  return out;
}

}  // namespace imdp
