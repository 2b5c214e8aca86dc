#include "imdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "imdp/errors.hpp"

namespace imdp {

namespace {

std::string triple(std::size_t s, std::size_t a, std::size_t q) {
  std::ostringstream os;
  os << "(" << s << "," << a << "," << q << ")";
  return os.str();
}

bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

// Nudges `x` so that it sums to one, moving only coordinates with slack and
// never leaving [lower, upper].
void fix_sum(std::vector<double>& x, std::span<const double> lower,
             std::span<const double> upper) {
  double gap = 1.0 - std::accumulate(x.begin(), x.end(), 0.0);
  for (std::size_t q = 0; q < x.size() && gap != 0.0; ++q) {
    if (gap > 0.0) {
      const double step = std::min(gap, upper[q] - x[q]);
      if (step > 0.0) {
        x[q] += step;
        gap -= step;
      }
    } else {
      const double step = std::min(-gap, x[q] - lower[q]);
      if (step > 0.0) {
        x[q] -= step;
        gap += step;
      }
    }
  }
}

}  // namespace

ImdpModel ImdpModel::with_shape(std::size_t n_states, std::size_t n_actions,
                                std::size_t horizon, double beta) {
  ImdpModel m;
  for (std::size_t s = 0; s < n_states; ++s) m.states.push_back("s" + std::to_string(s));
  for (std::size_t a = 0; a < n_actions; ++a) m.actions.push_back("a" + std::to_string(a));
  m.alpha.assign(n_states, 0.0);
  m.stage_cost.assign(n_states * n_actions, 0.0);
  m.terminal_cost.assign(n_states, 0.0);
  m.p_lower.assign(n_states * n_actions * n_states, 0.0);
  m.p_upper.assign(n_states * n_actions * n_states, 0.0);
  m.horizon = horizon;
  m.beta = beta;
  return m;
}

void ImdpModel::check_shape() const {
  const std::size_t ns = num_states();
  const std::size_t na = num_actions();
  auto expect = [](std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
      throw DimensionError(std::string(what) + " has " + std::to_string(got) +
                           " entries, expected " + std::to_string(want));
    }
  };
  if (ns == 0) throw DimensionError("model has no states");
  if (na == 0) throw DimensionError("model has no actions");
  expect(alpha.size(), ns, "alpha");
  expect(stage_cost.size(), ns * na, "stage_cost");
  expect(terminal_cost.size(), ns, "terminal_cost");
  expect(p_lower.size(), ns * na * ns, "p_lower");
  expect(p_upper.size(), ns * na * ns, "p_upper");
}

bool FeasibleSet::nonempty(double tol) const {
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t q = 0; q < size(); ++q) {
    if (lower[q] > upper[q] + tol) return false;
    lo += lower[q];
    hi += upper[q];
  }
  return lo <= 1.0 + tol && hi >= 1.0 - tol;
}

bool FeasibleSet::contains(std::span<const double> p, double tol) const {
  if (p.size() != size()) return false;
  double sum = 0.0;
  for (std::size_t q = 0; q < size(); ++q) {
    if (!std::isfinite(p[q])) return false;
    if (p[q] < lower[q] - tol || p[q] > upper[q] + tol) return false;
    sum += p[q];
  }
  return std::abs(sum - 1.0) <= tol;
}

std::vector<double> FeasibleSet::center() const {
  const double lo = std::accumulate(lower.begin(), lower.end(), 0.0);
  double width = 0.0;
  for (std::size_t q = 0; q < size(); ++q) width += upper[q] - lower[q];
  std::vector<double> x(lower);
  if (width > 0.0) {
    const double theta = std::clamp((1.0 - lo) / width, 0.0, 1.0);
    for (std::size_t q = 0; q < size(); ++q) {
      x[q] = lower[q] + theta * (upper[q] - lower[q]);
    }
  }
  fix_sum(x, lower, upper);
  return x;
}

std::vector<double> FeasibleSet::project(std::span<const double> p) const {
  if (p.size() != size()) throw DimensionError("projection: length mismatch");
  // sum_q clamp(p_q - theta, lower_q, upper_q) is nonincreasing in theta.
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t q = 0; q < size(); ++q) {
    lo = std::min(lo, p[q] - upper[q]);
    hi = std::max(hi, p[q] - lower[q]);
  }
  std::vector<double> x(size());
  auto eval = [&](double theta) {
    double sum = 0.0;
    for (std::size_t q = 0; q < size(); ++q) {
      x[q] = std::clamp(p[q] - theta, lower[q], upper[q]);
      sum += x[q];
    }
    return sum;
  };
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (eval(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  eval(0.5 * (lo + hi));
  fix_sum(x, lower, upper);
  return x;
}

ValidationReport validate_model(const ImdpModel& model) {
  ValidationReport report;
  auto& out = report.violations;
  try {
    model.check_shape();
  } catch (const DimensionError& e) {
    out.push_back(std::string("shape: ") + e.what());
    return report;
  }
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();

  if (!std::isfinite(model.beta) || model.beta < 0.0) {
    out.push_back("beta must be finite and nonnegative");
  }
  double alpha_sum = 0.0;
  for (std::size_t s = 0; s < ns; ++s) {
    if (!is_probability(model.alpha[s])) {
      out.push_back("alpha(" + std::to_string(s) + ") not in [0,1]");
    }
    alpha_sum += model.alpha[s];
  }
  if (std::abs(alpha_sum - 1.0) > kProbTol) {
    std::ostringstream os;
    os << "alpha sums to " << alpha_sum << ", not 1";
    out.push_back(os.str());
  }
  for (std::size_t s = 0; s < ns; ++s) {
    if (!std::isfinite(model.terminal_cost[s])) {
      out.push_back("terminal_cost(" + std::to_string(s) + ") not finite");
    }
    for (std::size_t a = 0; a < na; ++a) {
      if (!std::isfinite(model.cost(s, a))) {
        out.push_back("stage_cost(" + std::to_string(s) + "," +
                      std::to_string(a) + ") not finite");
      }
      double lo = 0.0;
      double hi = 0.0;
      for (std::size_t q = 0; q < ns; ++q) {
        const double l = model.lower(s, a, q);
        const double u = model.upper(s, a, q);
        if (!is_probability(l)) out.push_back("lower not in [0,1] at " + triple(s, a, q));
        if (!is_probability(u)) out.push_back("upper not in [0,1] at " + triple(s, a, q));
        if (l > u) out.push_back("lower exceeds upper at " + triple(s, a, q));
        lo += l;
        hi += u;
      }
      std::ostringstream os;
      if (lo > 1.0 + kProbTol) {
        os << "lower bounds sum to " << lo << " > 1 at (" << s << "," << a << ")";
        out.push_back(os.str());
      } else if (hi < 1.0 - kProbTol) {
        os << "upper bounds sum to " << hi << " < 1 at (" << s << "," << a << ")";
        out.push_back(os.str());
      }
    }
  }
  return report;
}

void require_valid(const ImdpModel& model) {
  const ValidationReport report = validate_model(model);
  if (report.ok()) return;
  std::string msg = "invalid model: " + report.violations.front();
  if (report.violations.size() > 1) {
    msg += " (and " + std::to_string(report.violations.size() - 1) + " more)";
  }
  throw ValidationError(msg);
}

FeasibleSet feasible_set(const ImdpModel& model, std::size_t s, std::size_t a) {
  if (s >= model.num_states() || a >= model.num_actions()) {
    throw DimensionError("feasible_set: index (" + std::to_string(s) + "," +
                         std::to_string(a) + ") out of range");
  }
  const auto lo = model.lower_row(s, a);
  const auto hi = model.upper_row(s, a);
  return FeasibleSet{{lo.begin(), lo.end()}, {hi.begin(), hi.end()}};
}

// ---------------------------------------------------------------------------
// Policy

Policy Policy::deterministic(const std::vector<std::vector<std::size_t>>& actions,
                             std::size_t n_actions) {
  Policy p;
  p.deterministic_ = true;
  p.horizon_ = actions.size();
  p.n_states_ = actions.empty() ? 0 : actions.front().size();
  p.n_actions_ = n_actions;
  p.probs_.assign(p.horizon_ * p.n_states_ * n_actions, 0.0);
  p.actions_.reserve(p.horizon_ * p.n_states_);
  for (std::size_t k = 0; k < actions.size(); ++k) {
    if (actions[k].size() != p.n_states_) {
      throw DimensionError("policy stage " + std::to_string(k) + " is ragged");
    }
    for (std::size_t s = 0; s < p.n_states_; ++s) {
      const std::size_t a = actions[k][s];
      if (a >= n_actions) {
        throw DimensionError("policy action " + std::to_string(a) +
                             " out of range at (k=" + std::to_string(k) +
                             ", s=" + std::to_string(s) + ")");
      }
      p.actions_.push_back(a);
      p.probs_[(k * p.n_states_ + s) * n_actions + a] = 1.0;
    }
  }
  return p;
}

Policy Policy::stochastic(
    const std::vector<std::vector<std::vector<double>>>& probabilities) {
  Policy p;
  p.horizon_ = probabilities.size();
  p.n_states_ = probabilities.empty() ? 0 : probabilities.front().size();
  p.n_actions_ = (probabilities.empty() || probabilities.front().empty())
                     ? 0
                     : probabilities.front().front().size();
  for (std::size_t k = 0; k < p.horizon_; ++k) {
    if (probabilities[k].size() != p.n_states_) {
      throw DimensionError("policy stage " + std::to_string(k) + " is ragged");
    }
    for (std::size_t s = 0; s < p.n_states_; ++s) {
      const auto& row = probabilities[k][s];
      if (row.size() != p.n_actions_) {
        throw DimensionError("policy row is ragged at (k=" + std::to_string(k) +
                             ", s=" + std::to_string(s) + ")");
      }
      double sum = 0.0;
      for (double x : row) {
        if (!is_probability(x)) {
          throw ValidationError("policy probability outside [0,1] at (k=" +
                                std::to_string(k) + ", s=" + std::to_string(s) + ")");
        }
        sum += x;
      }
      if (std::abs(sum - 1.0) > kProbTol) {
        throw ValidationError("policy row does not sum to 1 at (k=" +
                              std::to_string(k) + ", s=" + std::to_string(s) + ")");
      }
      p.probs_.insert(p.probs_.end(), row.begin(), row.end());
    }
  }
  return p;
}

std::size_t Policy::action(std::size_t k, std::size_t s) const {
  if (!deterministic_) throw ImdpError("action() called on a stochastic policy");
  return actions_[k * n_states_ + s];
}

long Policy::indicator_action(std::size_t k, std::size_t s) const {
  if (deterministic_) return static_cast<long>(action(k, s));
  const auto r = row(k, s);
  long found = -1;
  for (std::size_t a = 0; a < r.size(); ++a) {
    if (r[a] == 0.0) continue;
    if (r[a] != 1.0 || found >= 0) return -1;
    found = static_cast<long>(a);
  }
  return found;
}

std::vector<std::vector<std::size_t>> Policy::action_table() const {
  std::vector<std::vector<std::size_t>> out(horizon_);
  for (std::size_t k = 0; k < horizon_; ++k) {
    for (std::size_t s = 0; s < n_states_; ++s) out[k].push_back(action(k, s));
  }
  return out;
}

std::vector<std::vector<std::vector<double>>> Policy::probability_table() const {
  std::vector<std::vector<std::vector<double>>> out(horizon_);
  for (std::size_t k = 0; k < horizon_; ++k) {
    for (std::size_t s = 0; s < n_states_; ++s) {
      const auto r = row(k, s);
      out[k].emplace_back(r.begin(), r.end());
    }
  }
  return out;
}

void check_policy(const ImdpModel& model, const Policy& pi) {
  if (pi.horizon() != model.horizon ||
      (model.horizon > 0 && (pi.num_states() != model.num_states() ||
                             pi.num_actions() != model.num_actions()))) {
    throw DimensionError("policy shape does not match the model");
  }
}

// ---------------------------------------------------------------------------
// Adversary

Adversary::Adversary(std::size_t horizon, std::size_t n_states,
                     std::size_t n_actions)
    : horizon_(horizon),
      n_states_(n_states),
      n_actions_(n_actions),
      data_(horizon * n_states * n_actions * n_states, 0.0) {}

void Adversary::set(std::size_t k, std::size_t s, std::size_t a,
                    std::span<const double> p) {
  if (p.size() != n_states_) throw DimensionError("adversary vector length mismatch");
  std::copy(p.begin(), p.end(), dist(k, s, a).begin());
}

void check_adversary(const ImdpModel& model, const Adversary& xi) {
  if (xi.horizon() != model.horizon ||
      (model.horizon > 0 && (xi.num_states() != model.num_states() ||
                             xi.num_actions() != model.num_actions()))) {
    throw DimensionError("adversary shape does not match the model");
  }
  for (std::size_t k = 0; k < model.horizon; ++k) {
    for (std::size_t s = 0; s < model.num_states(); ++s) {
      for (std::size_t a = 0; a < model.num_actions(); ++a) {
        if (!feasible_set(model, s, a).contains(xi.dist(k, s, a))) {
          throw InfeasibleError(at_location(k, s, a, "adversary vector is infeasible"));
        }
      }
    }
  }
}

InducedChain induce_chain(const ImdpModel& model, const Policy& pi,
                          const Adversary& xi) {
  model.check_shape();
  check_policy(model, pi);
  check_adversary(model, xi);
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();

  InducedChain chain;
  chain.alpha = model.alpha;
  chain.n_actions = na;
  chain.stage_cost = model.stage_cost;
  chain.terminal_cost = model.terminal_cost;
  chain.horizon = model.horizon;
  chain.transition.assign(model.horizon,
                          std::vector<std::vector<double>>(ns, std::vector<double>(ns, 0.0)));
  for (std::size_t k = 0; k < model.horizon; ++k) {
    for (std::size_t s = 0; s < ns; ++s) {
      auto& col = chain.transition[k][s];
      const auto w = pi.row(k, s);
      for (std::size_t a = 0; a < na; ++a) {
        if (w[a] == 0.0) continue;
        const auto p = xi.dist(k, s, a);
        for (std::size_t q = 0; q < ns; ++q) col[q] += w[a] * p[q];
      }
    }
  }
  return chain;
}

}  // namespace imdp
