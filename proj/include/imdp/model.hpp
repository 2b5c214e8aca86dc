#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace imdp {

/// Tolerance for every stochasticity and interval check.
inline constexpr double kProbTol = 1e-9;

/// Finite-horizon interval MDP with time-invariant costs and bounds.
///
/// Storage is dense and row-major: `stage_cost[s * |A| + a]` and
/// `p_lower[(s * |A| + a) * |S| + q]`. Use the accessors rather than the raw
/// vectors where possible.
struct ImdpModel {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  std::vector<double> alpha;
  std::vector<double> stage_cost;
  std::vector<double> terminal_cost;
  std::vector<double> p_lower;
  std::vector<double> p_upper;
  std::size_t horizon = 0;
  double beta = 1.0;

  /// Creates a model with `n_states` x `n_actions` zero-filled tables and
  /// default labels "s0", "s1", ... / "a0", "a1", ....
  static ImdpModel with_shape(std::size_t n_states, std::size_t n_actions,
                              std::size_t horizon, double beta = 1.0);

  std::size_t num_states() const { return states.size(); }
  std::size_t num_actions() const { return actions.size(); }

  double cost(std::size_t s, std::size_t a) const {
    return stage_cost[s * num_actions() + a];
  }
  double& cost(std::size_t s, std::size_t a) {
    return stage_cost[s * num_actions() + a];
  }

  double lower(std::size_t s, std::size_t a, std::size_t q) const {
    return p_lower[(s * num_actions() + a) * num_states() + q];
  }
  double& lower(std::size_t s, std::size_t a, std::size_t q) {
    return p_lower[(s * num_actions() + a) * num_states() + q];
  }
  double upper(std::size_t s, std::size_t a, std::size_t q) const {
    return p_upper[(s * num_actions() + a) * num_states() + q];
  }
  double& upper(std::size_t s, std::size_t a, std::size_t q) {
    return p_upper[(s * num_actions() + a) * num_states() + q];
  }

  std::span<const double> lower_row(std::size_t s, std::size_t a) const {
    return {p_lower.data() + (s * num_actions() + a) * num_states(),
            num_states()};
  }
  std::span<const double> upper_row(std::size_t s, std::size_t a) const {
    return {p_upper.data() + (s * num_actions() + a) * num_states(),
            num_states()};
  }

  /// Throws DimensionError if any table disagrees with the label counts.
  void check_shape() const;
};

/// The box whose intersection with the probability simplex is the set of
/// feasible next-state distributions for one (state, action) pair.
struct FeasibleSet {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return lower.size(); }
  bool nonempty(double tol = kProbTol) const;
  bool contains(std::span<const double> p, double tol = kProbTol) const;
  /// Point `lower + theta * (upper - lower)` with theta chosen so the sum is
  /// one. Lies in the relative interior unless the set is a single point.
  std::vector<double> center() const;
  /// Euclidean projection of `p` onto the box intersected with the simplex.
  std::vector<double> project(std::span<const double> p) const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every interval and stochasticity invariant; never throws.
ValidationReport validate_model(const ImdpModel& model);

/// Throws ValidationError carrying the first few violations unless the model
/// is valid.
void require_valid(const ImdpModel& model);

FeasibleSet feasible_set(const ImdpModel& model, std::size_t s, std::size_t a);

/// Markov policy over stages 0..h-1. Stored as action distributions; a
/// deterministic policy additionally remembers its action map.
class Policy {
 public:
  Policy() = default;

  static Policy deterministic(
      const std::vector<std::vector<std::size_t>>& actions,
      std::size_t n_actions);
  /// `probabilities[k][s][a]`; every row must sum to one within kProbTol.
  static Policy stochastic(
      const std::vector<std::vector<std::vector<double>>>& probabilities);

  bool is_deterministic() const { return deterministic_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return n_states_; }
  std::size_t num_actions() const { return n_actions_; }

  std::span<const double> row(std::size_t k, std::size_t s) const {
    return {probs_.data() + (k * n_states_ + s) * n_actions_, n_actions_};
  }
  /// Action of a deterministic policy. Throws for stochastic policies.
  std::size_t action(std::size_t k, std::size_t s) const;
  /// Index of the single action carrying mass one, or -1 if the row mixes.
  long indicator_action(std::size_t k, std::size_t s) const;

  std::vector<std::vector<std::size_t>> action_table() const;
  std::vector<std::vector<std::vector<double>>> probability_table() const;

 private:
  bool deterministic_ = false;
  std::size_t horizon_ = 0;
  std::size_t n_states_ = 0;
  std::size_t n_actions_ = 0;
  std::vector<double> probs_;
  std::vector<std::size_t> actions_;
};

/// Per-stage, per-state, per-action next-state distribution.
class Adversary {
 public:
  Adversary() = default;
  Adversary(std::size_t horizon, std::size_t n_states, std::size_t n_actions);

  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return n_states_; }
  std::size_t num_actions() const { return n_actions_; }

  std::span<const double> dist(std::size_t k, std::size_t s,
                               std::size_t a) const {
    return {data_.data() + offset(k, s, a), n_states_};
  }
  std::span<double> dist(std::size_t k, std::size_t s, std::size_t a) {
    return {data_.data() + offset(k, s, a), n_states_};
  }
  void set(std::size_t k, std::size_t s, std::size_t a,
           std::span<const double> p);

 private:
  std::size_t offset(std::size_t k, std::size_t s, std::size_t a) const {
    return ((k * n_states_ + s) * n_actions_ + a) * n_states_;
  }

  std::size_t horizon_ = 0;
  std::size_t n_states_ = 0;
  std::size_t n_actions_ = 0;
  std::vector<double> data_;
};

/// Throws InfeasibleError naming the first (k, s, a) whose distribution is
/// outside its feasible set; DimensionError on shape mismatch.
void check_adversary(const ImdpModel& model, const Adversary& xi);
void check_policy(const ImdpModel& model, const Policy& pi);

/// Time-varying Markov chain obtained by fixing a policy and an adversary.
/// `transition[k][s]` is the next-state distribution out of `s` at stage k.
struct InducedChain {
  std::vector<std::vector<std::vector<double>>> transition;
  std::vector<double> alpha;
  std::size_t n_actions = 0;
  std::vector<double> stage_cost;  // [s * n_actions + a]
  std::vector<double> terminal_cost;
  std::size_t horizon = 0;

  std::size_t num_states() const { return alpha.size(); }
};

InducedChain induce_chain(const ImdpModel& model, const Policy& pi,
                          const Adversary& xi);

}  // namespace imdp
