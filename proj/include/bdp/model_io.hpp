#ifndef BDP_MODEL_IO_HPP
#define BDP_MODEL_IO_HPP

// JSON model files.  Schema:
//   { "kind": "kendall"|"mm_queue"|"moran"|"sis"|"option"|"custom",
//     "params": { ... },
//     // custom only:
//     "birth"/"death"/"reward": {"expr": "..."} or {"table": [..]},
//     "taboo": {"lower"?: int, "upper"?: int},
//     "state_cap"?: int }

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdp/expr.hpp"
#include "bdp/model.hpp"

namespace bdp {

inline BdpModel make_model(const std::string& kind,
                           const std::map<std::string, double>& params) {
  auto get = [&](const std::string& name) {
    auto it = params.find(name);
    if (it == params.end()) throw ModelError(kind + ": missing parameter '" + name + "'");
    return it->second;
  };
  auto get_or = [&](const std::string& name, double fallback) {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
  };
  auto has = [&](const std::string& name) { return params.count(name) > 0; };

  if (kind == "kendall") return make_kendall(get("lambda"), get("mu"));
  if (kind == "mm_queue") {
    std::optional<StateIndex> c;
    if (has("c")) c = static_cast<StateIndex>(get("c"));
    return make_mm_queue(get("lambda"), get("mu"), c);
  }
  if (kind == "moran")
    return make_moran(static_cast<StateIndex>(get("N")), get("fitness_1"), get("fitness_2"),
                      get("u"), get("v"));
  if (kind == "sis")
    return make_sis(static_cast<StateIndex>(get("N")), get("lambda"), get("mu"),
                    get("epsilon"), get_or("cost_a", 0.0), get_or("cost_b", 1.0));
  if (kind == "option") {
    std::optional<double> l0;
    if (has("lambda0")) l0 = get("lambda0");
    std::optional<StateIndex> strike;
    if (has("strike")) strike = static_cast<StateIndex>(get("strike"));
    return make_option(get("lambda"), get("mu"), get("immigration"), get("emigration"),
                       static_cast<StateIndex>(get("initial")), get_or("payoff_a", 0.0),
                       get_or("payoff_b", 1.0), l0, strike);
  }
  throw ModelError("unknown model kind '" + kind + "'");
}

namespace detail {

inline RateFunction load_rate_spec(const nlohmann::json& j, const std::string& field,
                                   const std::map<std::string, double>& params,
                                   const std::optional<StateIndex>& cap) {
  if (!j.is_object()) throw ModelError(field + ": expected an object");
  if (j.contains("expr")) {
    RateExpr e = parse_rate_expr(j.at("expr").get<std::string>(), params);
    return [e](StateIndex n) { return e.eval(n); };
  }
  if (j.contains("table")) {
    std::vector<double> table = j.at("table").get<std::vector<double>>();
    if (!cap) throw ModelError(field + ": tabulated rates require state_cap");
    if (static_cast<StateIndex>(table.size()) < *cap + 1)
      throw ModelError(field + ": table must cover states 0..state_cap");
    return [table](StateIndex n) {
      return n >= 0 && n < static_cast<StateIndex>(table.size())
                 ? table[static_cast<std::size_t>(n)]
                 : 0.0;
    };
  }
  throw ModelError(field + ": expected {\"expr\": ...} or {\"table\": ...}");
}

// Probes rates over a prefix of the state space so schema errors surface
// at load time rather than deep inside a transform evaluation.
inline void probe_invariants(const BdpModel& m) {
  const StateIndex horizon = m.state_cap ? *m.state_cap : 1000;
  if (m.death && m.death(0) != 0.0) throw ModelError("mu_0 must be 0");
  for (StateIndex n = 0; n <= horizon; ++n) {
    m.birth_rate(n);  // throws on negative/non-finite
    m.death_rate(n);
    m.reward_at(n);
  }
}

}  // namespace detail

inline BdpModel load_model(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ModelError("model file: expected a JSON object");
  const std::string kind = doc.at("kind").get<std::string>();

  std::map<std::string, double> params;
  if (doc.contains("params")) {
    for (auto& [key, value] : doc.at("params").items()) {
      if (!value.is_number()) throw ModelError("params." + key + ": expected a number");
      params[key] = value.get<double>();
    }
  }

  BdpModel m;
  if (kind == "custom") {
    if (doc.contains("state_cap")) m.state_cap = doc.at("state_cap").get<StateIndex>();
    m.birth = detail::load_rate_spec(doc.at("birth"), "birth", params, m.state_cap);
    m.death = detail::load_rate_spec(doc.at("death"), "death", params, m.state_cap);
    if (doc.contains("reward"))
      m.reward = detail::load_rate_spec(doc.at("reward"), "reward", params, m.state_cap);
    else
      m.reward = [](StateIndex) { return 1.0; };
    if (doc.contains("taboo")) {
      const auto& t = doc.at("taboo");
      if (t.contains("lower")) m.taboo.lower = t.at("lower").get<StateIndex>();
      if (t.contains("upper")) m.taboo.upper = t.at("upper").get<StateIndex>();
    }
  } else {
    m = make_model(kind, params);
    if (doc.contains("state_cap")) m.state_cap = doc.at("state_cap").get<StateIndex>();
    if (doc.contains("taboo")) {
      const auto& t = doc.at("taboo");
      m.taboo = {};
      if (t.contains("lower")) m.taboo.lower = t.at("lower").get<StateIndex>();
      if (t.contains("upper")) m.taboo.upper = t.at("upper").get<StateIndex>();
    }
  }
  detail::probe_invariants(m);
  return m;
}

inline BdpModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError("model file " + path + ": " + e.what());
  }
  try {
    return load_model(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError("model file " + path + ": " + e.what());
  }
}

}  // namespace bdp

#endif  // BDP_MODEL_IO_HPP
