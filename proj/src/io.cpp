#include "imdp/io.hpp"

#include <fstream>

#include "imdp/errors.hpp"
#include "imdp/gridworld.hpp"

namespace imdp {

namespace {

const Json& field(const Json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    throw InputError(std::string("missing field \"") + name + "\"");
  }
  return doc.at(name);
}

std::vector<double> numbers(const Json& arr, const std::string& what, std::size_t expected) {
  if (!arr.is_array()) throw InputError(what + " must be an array");
  if (arr.size() != expected) {
    throw DimensionError(what + " has " + std::to_string(arr.size()) + " entries, expected " +
                         std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& x : arr) {
    if (!x.is_number()) throw InputError(what + " must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::string> labels(const Json& arr, const char* what) {
  if (!arr.is_array() || arr.empty()) throw InputError(std::string(what) + " must be a nonempty array");
  std::vector<std::string> out;
  for (const auto& x : arr) {
    if (x.is_string()) {
      out.push_back(x.get<std::string>());
    } else if (x.is_number()) {
      out.push_back(x.dump());
    } else {
      throw InputError(std::string(what) + " must contain strings");
    }
  }
  return out;
}

const Json& unwrap(const Json& doc, const char* key) {
  if (doc.is_object() && doc.contains(key)) return doc.at(key);
  return doc;
}

}  // namespace

Json model_to_json(const ImdpModel& model) {
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();
  Json cost = Json::array();
  Json lower = Json::array();
  Json upper = Json::array();
  for (std::size_t s = 0; s < ns; ++s) {
    Json crow = Json::array();
    Json lrow = Json::array();
    Json urow = Json::array();
    for (std::size_t a = 0; a < na; ++a) {
      crow.push_back(model.cost(s, a));
      const auto l = model.lower_row(s, a);
      const auto u = model.upper_row(s, a);
      lrow.push_back(std::vector<double>(l.begin(), l.end()));
      urow.push_back(std::vector<double>(u.begin(), u.end()));
    }
    cost.push_back(std::move(crow));
    lower.push_back(std::move(lrow));
    upper.push_back(std::move(urow));
  }
  return Json{{"states", model.states},
              {"actions", model.actions},
              {"alpha", model.alpha},
              {"stage_cost", std::move(cost)},
              {"terminal_cost", model.terminal_cost},
              {"p_lower", std::move(lower)},
              {"p_upper", std::move(upper)},
              {"horizon", model.horizon},
              {"beta", model.beta}};
}

ImdpModel model_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("model document must be a JSON object");
  ImdpModel m;
  m.states = labels(field(doc, "states"), "states");
  m.actions = labels(field(doc, "actions"), "actions");
  const std::size_t ns = m.num_states();
  const std::size_t na = m.num_actions();
  m.alpha = numbers(field(doc, "alpha"), "alpha", ns);
  m.terminal_cost = numbers(field(doc, "terminal_cost"), "terminal_cost", ns);

  const Json& horizon = field(doc, "horizon");
  if (!horizon.is_number_integer() || horizon.get<long long>() < 0) {
    throw InputError("horizon must be a nonnegative integer");
  }
  m.horizon = horizon.get<std::size_t>();
  if (doc.contains("beta")) {
    if (!doc.at("beta").is_number()) throw InputError("beta must be a number");
    m.beta = doc.at("beta").get<double>();
  }

  const Json& cost = field(doc, "stage_cost");
  if (!cost.is_array() || cost.size() != ns) throw DimensionError("stage_cost must be [state][action]");
  for (std::size_t s = 0; s < ns; ++s) {
    auto row = numbers(cost[s], "stage_cost[" + std::to_string(s) + "]", na);
    m.stage_cost.insert(m.stage_cost.end(), row.begin(), row.end());
  }
  auto tensor = [&](const char* name, std::vector<double>& out) {
    const Json& t = field(doc, name);
    if (!t.is_array() || t.size() != ns) {
      throw DimensionError(std::string(name) + " must be [state][action][next]");
    }
    for (std::size_t s = 0; s < ns; ++s) {
      if (!t[s].is_array() || t[s].size() != na) {
        throw DimensionError(std::string(name) + "[" + std::to_string(s) + "] must have " +
                             std::to_string(na) + " action rows");
      }
      for (std::size_t a = 0; a < na; ++a) {
        auto row = numbers(t[s][a],
                           std::string(name) + "[" + std::to_string(s) + "][" + std::to_string(a) + "]",
                           ns);
        out.insert(out.end(), row.begin(), row.end());
      }
    }
  };
  tensor("p_lower", m.p_lower);
  tensor("p_upper", m.p_upper);
  m.check_shape();
  return m;
}

Json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path);
  try {
    return Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

ImdpModel load_model(const std::string& path) { return model_from_json(load_json(path)); }

Json policy_to_json(const Policy& pi) {
  if (pi.is_deterministic()) return Json(pi.action_table());
  return Json(pi.probability_table());
}

Policy policy_from_json(const Json& doc, const ImdpModel& model) {
  const Json& body = unwrap(doc, "policy");
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();
  if (!body.is_array() || body.size() != model.horizon) {
    throw DimensionError("policy must have one entry per stage (" + std::to_string(model.horizon) +
                         ")");
  }
  if (model.horizon == 0) return Policy::deterministic({}, na);

  const bool stochastic = body[0].is_array() && !body[0].empty() && body[0][0].is_array();
  if (!stochastic) {
    std::vector<std::vector<std::size_t>> table;
    for (const auto& stage : body) {
      if (!stage.is_array() || stage.size() != ns) throw DimensionError("policy stage must list every state");
      std::vector<std::size_t> row;
      for (const auto& a : stage) {
        if (!a.is_number_integer() || a.get<long long>() < 0) {
          throw InputError("deterministic policy entries must be action indices");
        }
        row.push_back(a.get<std::size_t>());
      }
      table.push_back(std::move(row));
    }
    return Policy::deterministic(table, na);
  }
  std::vector<std::vector<std::vector<double>>> probs;
  for (const auto& stage : body) {
    if (!stage.is_array() || stage.size() != ns) throw DimensionError("policy stage must list every state");
    std::vector<std::vector<double>> rows;
    for (const auto& row : stage) rows.push_back(numbers(row, "policy row", na));
    probs.push_back(std::move(rows));
  }
  return Policy::stochastic(probs);
}

Json adversary_to_json(const Adversary& xi) {
  Json out = Json::array();
  for (std::size_t k = 0; k < xi.horizon(); ++k) {
    Json stage = Json::array();
    for (std::size_t s = 0; s < xi.num_states(); ++s) {
      Json per_action = Json::array();
      for (std::size_t a = 0; a < xi.num_actions(); ++a) {
        const auto p = xi.dist(k, s, a);
        per_action.push_back(std::vector<double>(p.begin(), p.end()));
      }
      stage.push_back(std::move(per_action));
    }
    out.push_back(std::move(stage));
  }
  return out;
}

Adversary adversary_from_json(const Json& doc, const ImdpModel& model) {
  const Json& body = unwrap(doc, "adversary");
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();
  if (!body.is_array() || body.size() != model.horizon) {
    throw DimensionError("adversary must have one entry per stage");
  }
  Adversary xi(model.horizon, ns, na);
  for (std::size_t k = 0; k < model.horizon; ++k) {
    if (!body[k].is_array() || body[k].size() != ns) throw DimensionError("adversary stage must list every state");
    for (std::size_t s = 0; s < ns; ++s) {
      if (!body[k][s].is_array() || body[k][s].size() != na) {
        throw DimensionError("adversary entry must list every action");
      }
      for (std::size_t a = 0; a < na; ++a) {
        xi.set(k, s, a, numbers(body[k][s][a], "adversary vector", ns));
      }
    }
  }
  return xi;
}

Json solve_result_to_json(const SolveResult& result, bool with_diagnostics) {
  Json out{{"j_bar_star", result.j_bar_star},
           {"policy", policy_to_json(result.policy)},
           {"adversary", adversary_to_json(result.adversary)},
           {"v_star", result.v_star.stages}};
  if (with_diagnostics) {
    Json diag = Json::array();
    for (const auto& stage : result.stage_diagnostics) {
      Json js = Json::array();
      for (const auto& state : stage) {
        Json ja = Json::array();
        for (const auto& d : state) {
          ja.push_back(Json{{"nu_star", d.nu_star},
                            {"iterations", d.iterations},
                            {"residual", d.residual},
                            {"active_lower", d.active_lower},
                            {"active_upper", d.active_upper}});
        }
        js.push_back(std::move(ja));
      }
      diag.push_back(std::move(js));
    }
    out["diagnostics"] = std::move(diag);
  }
  return out;
}

Json evaluation_to_json(const RobustEvaluation& eval, const std::string& objective) {
  return Json{{"objective", objective},
              {"value", eval.value},
              {"adversary", adversary_to_json(eval.xi_worst)},
              {"values", eval.v.stages}};
}

Json experiment_summary_json(const gridworld::ExperimentReport& report) {
  auto run_json = [](const gridworld::BetaRun& r) {
    std::size_t clockwise = 0;
    for (const auto& path : r.showcase.states) clockwise += gridworld::is_clockwise(path) ? 1 : 0;
    return Json{{"beta", r.beta},
                {"j_bar_star", r.solution.j_bar_star},
                {"cost_bound", r.report.cost_bound},
                {"worst_case_entropy", r.report.worst_case_entropy},
                {"combined_value_beta1", r.report.combined_value},
                {"clockwise_runs", clockwise},
                {"showcase_runs", r.showcase.size()}};
  };
  return Json{{"seed", report.seed},
              {"beta1", run_json(report.regularized)},
              {"beta0", run_json(report.unregularized)},
              {"random_adversary_mean_combined", report.random_adv_statistic.mean},
              {"random_adversary_standard_error", report.random_adv_statistic.standard_error}};
}

}  // namespace imdp
