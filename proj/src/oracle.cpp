#include "imdp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "imdp/entropy.hpp"
#include "imdp/errors.hpp"
#include "imdp/robust_eval.hpp"

namespace imdp {

namespace {

// Candidate values for one coordinate.
std::vector<double> coarse_axis(double lo, double hi, double step) {
  std::vector<double> out{lo};
  for (double m = std::floor(lo / step) + 1.0; m * step < hi; m += 1.0) out.push_back(m * step);
  if (hi > lo) out.push_back(hi);
  return out;
}

std::vector<double> local_axis(double center, double lo, double hi, double step, int radius) {
  std::vector<double> out;
  for (int d = -radius; d <= radius; ++d) {
    const double x = center + d * step;
    if (x >= lo && x <= hi) out.push_back(x);
  }
  if (center - radius * step < lo) out.insert(out.begin(), lo);
  if (center + radius * step > hi) out.push_back(hi);
  return out;
}

class GridSearch {
 public:
  GridSearch(const FeasibleSet& box, std::span<const double> v, double stage_cost, double beta)
      : box_(box), v_(v), cost_(stage_cost), beta_(beta), p_(box.size(), 0.0) {}

  // Runs over the Cartesian product of `axes` for the first n-1 coordinates.
  void sweep(const std::vector<std::vector<double>>& axes, double miss_tolerance) {
    rec(axes, 0, 0.0, miss_tolerance);
  }

  GridInnerResult result;

 private:
  void rec(const std::vector<std::vector<double>>& axes, std::size_t i, double used,
           double tol) {
    const std::size_t n = box_.size();
    if (i + 1 == n) {
      const double last = 1.0 - used;
      if (last < box_.lower[i] - tol || last > box_.upper[i] + tol) return;
      p_[i] = last;
      if (last < box_.lower[i] || last > box_.upper[i]) {
        consider(box_.project(p_));
      } else {
        consider(p_);
      }
      return;
    }
    for (double x : axes[i]) {
      if (used + x > 1.0 + tol) break;
      p_[i] = x;
      rec(axes, i + 1, used + x, tol);
    }
  }

  void consider(const std::vector<double>& p) {
    ++result.evaluated;
    const double value = cost_ + phi(p, v_, beta_);
    if (result.p_best.empty() || value > result.value) {
      result.value = value;
      result.p_best = p;
    }
  }

  const FeasibleSet& box_;
  std::span<const double> v_;
  double cost_;
  double beta_;
  std::vector<double> p_;
};

}  // namespace

GridInnerResult grid_inner_oracle(const FeasibleSet& box, std::span<const double> v,
                                  double stage_cost, double beta, double resolution,
                                  double refine_to) {
  const std::size_t n = box.size();
  if (n == 0 || n > kGridOracleMaxStates) {
    throw BudgetExceeded("grid_inner_oracle handles 1 to 4 states, got " + std::to_string(n));
  }
  if (v.size() != n) throw DimensionError("grid_inner_oracle: length mismatch");
  if (!(resolution >= 1e-4)) throw BudgetExceeded("grid_inner_oracle: resolution below 1e-4");
  if (!box.nonempty()) throw InfeasibleError("grid_inner_oracle: empty feasible set");
  if (refine_to < 0.0) refine_to = resolution / 100.0;

  GridSearch search(box, v, stage_cost, beta);
  std::vector<std::vector<double>> axes;
  for (std::size_t q = 0; q + 1 < n; ++q) {
    axes.push_back(coarse_axis(box.lower[q], box.upper[q], resolution));
  }
  search.sweep(axes, resolution);
  if (search.result.p_best.empty()) {
    // Every grid point missed the last box by more than one step.
    search.sweep(axes, std::numeric_limits<double>::infinity());
  }

  constexpr int kRadius = 10;
  for (double step = resolution / 10.0; refine_to > 0.0 && step >= refine_to * (1 - 1e-9);
       step /= 10.0) {
    const std::vector<double> center = search.result.p_best;
    axes.clear();
    for (std::size_t q = 0; q + 1 < n; ++q) {
      axes.push_back(local_axis(center[q], box.lower[q], box.upper[q], step, kRadius));
    }
    search.sweep(axes, step);
  }
  return search.result;
}

GridInnerResult grid_mixture_oracle(std::span<const FeasibleSet> boxes,
                                    std::span<const double> weights,
                                    std::span<const double> v, double expected_cost,
                                    double beta, double resolution) {
  if (boxes.size() != 2 || weights.size() != 2) {
    throw BudgetExceeded("grid_mixture_oracle handles exactly two actions");
  }
  const std::size_t n = boxes[0].size();
  if (n == 0 || n > 3 || boxes[1].size() != n || v.size() != n) {
    throw BudgetExceeded("grid_mixture_oracle handles at most three states");
  }
  if (!(resolution >= 1e-3)) throw BudgetExceeded("grid_mixture_oracle: resolution below 1e-3");

  // Feasible grid points of each action's set, collected once.
  auto points_of = [&](const FeasibleSet& box) {
    std::vector<std::vector<double>> pts;
    std::vector<double> p(n, 0.0);
    std::vector<std::vector<double>> axes;
    for (std::size_t q = 0; q + 1 < n; ++q) {
      axes.push_back(coarse_axis(box.lower[q], box.upper[q], resolution));
    }
    std::function<void(std::size_t, double)> rec = [&](std::size_t i, double used) {
      if (i + 1 == n) {
        p[i] = 1.0 - used;
        if (p[i] < box.lower[i] - resolution || p[i] > box.upper[i] + resolution) return;
        pts.push_back(box.contains(p, 0.0) ? p : box.project(p));
        return;
      }
      for (double x : axes[i]) {
        if (used + x > 1.0 + resolution) break;
        p[i] = x;
        rec(i + 1, used + x);
      }
    };
    rec(0, 0.0);
    if (pts.empty()) pts.push_back(box.center());
    return pts;
  };
  const auto first = points_of(boxes[0]);
  const auto second = points_of(boxes[1]);

  GridInnerResult out;
  std::vector<double> mix(n);
  for (const auto& p : first) {
    for (const auto& r : second) {
      for (std::size_t q = 0; q < n; ++q) mix[q] = weights[0] * p[q] + weights[1] * r[q];
      const double value = expected_cost + phi(mix, v, beta);
      ++out.evaluated;
      if (out.p_best.empty() || value > out.value) {
        out.value = value;
        out.p_best = mix;
      }
    }
  }
  return out;
}

PolicyOracleResult exhaustive_policy_oracle(const ImdpModel& model) {
  require_valid(model);
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();
  const std::size_t h = model.horizon;
  const double count = std::pow(static_cast<double>(na), static_cast<double>(ns * h));
  if (count > kPolicyEnumerationBudget) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "policy enumeration needs %.3g policies, budget is 1e5", count);
    throw BudgetExceeded(buf);
  }

  std::vector<std::vector<std::size_t>> table(h, std::vector<std::size_t>(ns, 0));
  PolicyOracleResult out;
  out.value = std::numeric_limits<double>::infinity();
  while (true) {
    const Policy pi = Policy::deterministic(table, na);
    const double value = robust_eval_combined(model, pi).value;
    ++out.policies_evaluated;
    if (value < out.value) {
      out.value = value;
      out.best_policy = pi;
    }
    // Odometer increment over all (k, s) digits.
    std::size_t digit = 0;
    for (; digit < ns * h; ++digit) {
      auto& a = table[digit / ns][digit % ns];
      if (++a < na) break;
      a = 0;
    }
    if (digit == ns * h) break;
  }
  return out;
}

}  // namespace imdp
