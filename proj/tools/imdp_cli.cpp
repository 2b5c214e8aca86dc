#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "imdp/entropy.hpp"
#include "imdp/errors.hpp"
#include "imdp/gridworld.hpp"
#include "imdp/inner_solver.hpp"
#include "imdp/io.hpp"
#include "imdp/oracle.hpp"
#include "imdp/parallel.hpp"
#include "imdp/robust_eval.hpp"
#include "imdp/simulator.hpp"
#include "imdp/value_iteration.hpp"

namespace {

using namespace imdp;

enum Exit : int { kOk = 0, kInvalidInput = 1, kInvalidModel = 2, kBudget = 3, kFailure = 4 };

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

std::string join(std::span<const double> xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + fmt(xs[i]);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw ImdpError("cannot write " + path);
  os << text;
}

std::uint64_t draw_seed() {
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  std::cout << "seed " << seed << "\n";
  return seed;
}

ImdpModel load_with_beta(const std::string& path, const std::vector<double>& beta) {
  ImdpModel m = load_model(path);
  if (!beta.empty()) m.beta = beta.front();
  return m;
}

const char* kCsvHelp =
    "Trajectory CSV columns: path,stage,state,state_label,action,action_label,stage_cost,"
    "cumulative_cost (stage h has empty action columns and stage_cost = c_h).\n"
    "Summary CSV columns: stage,mean_cumulative_cost,empirical_entropy,mean_surprisal,"
    "mean_combined.";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust cost + entropy minimization on finite-horizon interval MDPs"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads (0 = hardware)");

  // validate
  std::string model_path;
  auto* validate = app.add_subcommand("validate", "Check interval and stochasticity conditions");
  validate->add_option("model", model_path, "Model JSON")->required();

  // solve
  std::vector<double> beta_override;
  bool trace = false;
  std::string out_path;
  auto* solve_cmd = app.add_subcommand("solve", "Robust value iteration");
  solve_cmd->add_option("model", model_path, "Model JSON")->required();
  solve_cmd->add_option("--beta", beta_override, "Override the model's entropy weight")
      ->expected(1);
  solve_cmd->add_flag("--trace", trace, "Include per-(k,s,a) inner-solver diagnostics");
  solve_cmd->add_option("--out", out_path, "Result JSON");

  // evaluate
  std::string policy_path;
  std::string objective = "combined";
  auto* evaluate = app.add_subcommand("evaluate", "Worst case of a fixed policy");
  evaluate->add_option("model", model_path, "Model JSON")->required();
  evaluate->add_option("--policy", policy_path, "Policy JSON (or a solve result)")->required();
  evaluate->add_option("--objective", objective, "combined or cost")
      ->check(CLI::IsMember({"combined", "cost"}));
  evaluate->add_option("--out", out_path, "Evaluation JSON");

  // simulate
  std::string adversary_arg = "worst";
  std::size_t paths = 1000;
  std::vector<std::uint64_t> seed_opt;
  std::string summary_path;
  auto* simulate_cmd = app.add_subcommand("simulate", "Seeded sample paths");
  simulate_cmd->footer(kCsvHelp);
  simulate_cmd->add_option("model", model_path, "Model JSON")->required();
  simulate_cmd->add_option("--policy", policy_path, "Policy JSON (or a solve result)")
      ->required();
  simulate_cmd->add_option("--adversary", adversary_arg,
                           "worst (combined objective), random, or an adversary JSON file");
  simulate_cmd->add_option("--paths", paths, "Number of paths");
  simulate_cmd->add_option("--seed", seed_opt, "RNG seed (drawn and printed if omitted)")
      ->expected(1);
  simulate_cmd->add_option("--out", out_path, "Trajectory CSV")->required();
  simulate_cmd->add_option("--summary", summary_path, "Per-stage summary CSV");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute-force verifiers");
  oracle->require_subcommand(1);
  std::vector<double> lower, upper, values;
  double stage_cost = 0.0;
  double beta = 1.0;
  double resolution = 1e-3;
  double refine_to = -1.0;
  auto* oracle_inner = oracle->add_subcommand("inner", "Grid search for one inner maximization");
  oracle_inner->add_option("--lower", lower, "Lower bounds")->required()->delimiter(',');
  oracle_inner->add_option("--upper", upper, "Upper bounds")->required()->delimiter(',');
  oracle_inner->add_option("--v", values, "Next-stage values")->required()->delimiter(',');
  oracle_inner->add_option("--cost", stage_cost, "Stage cost");
  oracle_inner->add_option("--beta", beta, "Entropy weight");
  oracle_inner->add_option("--resolution", resolution, "Coarse grid step (>= 1e-4)");
  oracle_inner->add_option("--refine-to", refine_to, "Finest refinement step (0 = none)");
  auto* oracle_policy = oracle->add_subcommand(
      "policy", "Enumerate deterministic policies (budget 1e5 policies)");
  oracle_policy->add_option("model", model_path, "Model JSON")->required();
  oracle_policy->add_option("--beta", beta_override, "Override the model's entropy weight")
      ->expected(1);
  auto* oracle_entropy = oracle->add_subcommand(
      "entropy", "Path entropy by enumeration (budget 1e6 paths) against the recursion");
  oracle_entropy->add_option("model", model_path, "Model JSON")->required();
  oracle_entropy->add_option("--policy", policy_path, "Policy JSON")->required();
  oracle_entropy->add_option("--adversary", adversary_arg, "worst or an adversary JSON file");

  // example
  auto* example = app.add_subcommand("example", "Bundled examples");
  example->require_subcommand(1);
  std::vector<double> grid_beta;
  std::uint64_t grid_seed = gridworld::kDefaultSeed;
  std::string grid_out = "gridworld_out";
  auto* grid = example->add_subcommand("gridworld", "2x2 weeding field, beta = 1 vs beta = 0");
  grid->footer(kCsvHelp);
  grid->add_option("--beta", grid_beta, "Only write the model and solution for this beta")
      ->expected(1);
  grid->add_option("--seed", grid_seed, "Simulation seed");
  grid->add_option("--out", grid_out, "Output directory");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) set_max_threads(threads);

  try {
    if (*validate) {
      const ImdpModel m = load_model(model_path);
      const ValidationReport report = validate_model(m);
      if (report.ok()) {
        std::cout << "ok: " << m.num_states() << " states, " << m.num_actions()
                  << " actions, horizon " << m.horizon << "\n";
        return kOk;
      }
      for (const auto& v : report.violations) std::cout << v << "\n";
      return kInvalidModel;
    }

    if (*solve_cmd) {
      const ImdpModel m = load_with_beta(model_path, beta_override);
      const SolveResult r = solve(m);
      std::cout << "j_bar_star " << fmt(r.j_bar_star) << "\n";
      const std::string doc = solve_result_to_json(r, trace).dump(2) + "\n";
      if (out_path.empty()) {
        std::cout << doc;
      } else {
        write_file(out_path, doc);
      }
      return kOk;
    }

    if (*evaluate) {
      const ImdpModel m = load_model(model_path);
      require_valid(m);
      const Policy pi = policy_from_json(load_json(policy_path), m);
      const RobustEvaluation e =
          objective == "cost" ? robust_eval_cost_only(m, pi) : robust_eval_combined(m, pi);
      std::cout << objective << " " << fmt(e.value) << "\n";
      if (!out_path.empty()) write_file(out_path, evaluation_to_json(e, objective).dump(2) + "\n");
      return kOk;
    }

    if (*simulate_cmd) {
      const ImdpModel m = load_model(model_path);
      require_valid(m);
      const Policy pi = policy_from_json(load_json(policy_path), m);
      const std::uint64_t seed = seed_opt.empty() ? draw_seed() : seed_opt.front();
      Adversary xi;
      if (adversary_arg == "worst") {
        xi = robust_eval_combined(m, pi).xi_worst;
      } else if (adversary_arg == "random") {
        xi = random_adversary(m, seed);
      } else {
        xi = adversary_from_json(load_json(adversary_arg), m);
        check_adversary(m, xi);
      }
      const TrajectoryBatch batch = simulate(m, pi, xi, paths, seed);
      {
        std::ofstream os(out_path);
        if (!os) throw ImdpError("cannot write " + out_path);
        write_trajectory_csv(os, m, batch);
      }
      if (!summary_path.empty()) {
        std::ofstream os(summary_path);
        if (!os) throw ImdpError("cannot write " + summary_path);
        write_summary_csv(os, batch);
      }
      const CombinedStatistic stat = combined_statistic(batch, m.beta);
      std::cout << "paths " << batch.size() << "\n"
                << "mean_cost " << fmt(batch.mean_cumulative_cost.back()) << "\n"
                << "empirical_entropy " << fmt(empirical_entropy(batch)) << "\n"
                << "mean_combined " << fmt(stat.mean) << " +- " << fmt(stat.standard_error)
                << "\n";
      return kOk;
    }

    if (*oracle_inner) {
      if (lower.size() != upper.size() || lower.size() != values.size()) {
        throw DimensionError("--lower, --upper and --v must have equal length");
      }
      const FeasibleSet box{lower, upper};
      const GridInnerResult g = grid_inner_oracle(box, values, stage_cost, beta, resolution,
                                                  refine_to);
      const InnerSolveResult s = solve_inner(box, values, stage_cost, beta);
      std::cout << "oracle " << fmt(g.value) << " at " << join(g.p_best) << " (" << g.evaluated
                << " points)\n"
                << "solver " << fmt(s.value) << " at " << join(s.p_star) << "\n"
                << "gap " << fmt(s.value - g.value) << "\n";
      return kOk;
    }

    if (*oracle_policy) {
      const ImdpModel m = load_with_beta(model_path, beta_override);
      const PolicyOracleResult o = exhaustive_policy_oracle(m);
      const SolveResult r = solve(m);
      std::cout << "oracle " << fmt(o.value) << " (" << o.policies_evaluated << " policies)\n"
                << "solver " << fmt(r.j_bar_star) << "\n"
                << "gap " << fmt(r.j_bar_star - o.value) << "\n";
      return kOk;
    }

    if (*oracle_entropy) {
      const ImdpModel m = load_model(model_path);
      require_valid(m);
      const Policy pi = policy_from_json(load_json(policy_path), m);
      Adversary xi;
      if (adversary_arg == "worst") {
        xi = robust_eval_combined(m, pi).xi_worst;
      } else {
        xi = adversary_from_json(load_json(adversary_arg), m);
        check_adversary(m, xi);
      }
      const InducedChain chain = induce_chain(m, pi, xi);
      const double direct = path_entropy_direct(chain);
      const double recursive = entropy_recursion(chain).entropy;
      std::cout << "enumeration " << fmt(direct) << "\n"
                << "recursion " << fmt(recursive) << "\n"
                << "gap " << fmt(recursive - direct) << "\n";
      return kOk;
    }

    if (*grid) {
      namespace fs = std::filesystem;
      if (!grid_beta.empty()) {
        const ImdpModel m = gridworld::build_gridworld(grid_beta.front());
        const SolveResult r = solve(m);
        fs::create_directories(grid_out);
        write_file((fs::path(grid_out) / "model.json").string(), model_to_json(m).dump(2) + "\n");
        write_file((fs::path(grid_out) / "solve.json").string(),
                   solve_result_to_json(r, false).dump(2) + "\n");
        const TrajectoryBatch batch =
            simulate(m, r.policy, r.adversary, gridworld::kShowcasePaths, grid_seed);
        std::ofstream os(fs::path(grid_out) / "showcase.csv");
        write_trajectory_csv(os, m, batch);
        std::cout << "beta " << fmt(m.beta) << "\n"
                  << "j_bar_star " << fmt(r.j_bar_star) << "\n"
                  << "cost_bound " << fmt(robust_eval_cost_only(m, r.policy).value) << "\n";
        return kOk;
      }
      const gridworld::ExperimentReport rep = gridworld::run_experiment(grid_seed);
      gridworld::write_experiment(rep, grid_out);
      for (const auto* run : {&rep.regularized, &rep.unregularized}) {
        std::size_t clockwise = 0;
        for (const auto& p : run->showcase.states) clockwise += gridworld::is_clockwise(p);
        std::cout << "beta " << fmt(run->beta) << ": j_bar_star " << fmt(run->solution.j_bar_star)
                  << ", cost bound " << fmt(run->report.cost_bound) << ", worst-case entropy "
                  << fmt(run->report.worst_case_entropy) << ", clockwise " << clockwise << "/"
                  << run->showcase.size() << "\n";
      }
      std::cout << "random adversary mean combined " << fmt(rep.random_adv_statistic.mean)
                << " +- " << fmt(rep.random_adv_statistic.standard_error) << "\n";
      return kOk;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ValidationError& e) {
    std::cerr << "invalid model: " << e.what() << "\n";
    return kInvalidModel;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInvalidModel;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
