#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lcb/harness.hpp"

namespace lcb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key()))
      fail("unknown config key \"" + (where.empty() ? it.key() : where + "." + it.key()) + "\"");
  }
}

AlgorithmKind parse_algorithm(const std::string& s) {
  if (s == "logdet_ftrl") return AlgorithmKind::logdet_ftrl;
  if (s == "exp4") return AlgorithmKind::exp4;
  if (s == "misspec_ftrl") return AlgorithmKind::misspec_ftrl;
  if (s == "corral") return AlgorithmKind::corral;
  if (s == "uniform_random") return AlgorithmKind::uniform_random;
  fail("algorithm: unknown value \"" + s + "\"");
}

Vec parse_vec(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where + ": expected an array of numbers");
  Vec v;
  for (const auto& x : j) {
    if (!x.is_number()) fail(where + ": expected an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

ContextSpec parse_context(const json& j, int d) {
  ContextSpec spec;
  spec.d = d;
  reject_unknown(j, "context", {"kind", "sets", "q", "K"});
  const std::string kind = j.value("kind", "sleeping");
  if (kind == "finite_support") {
    spec.kind = ContextKind::finite_support;
    if (!j.contains("sets")) fail("context.sets: required for finite_support");
    for (const auto& entry : j.at("sets")) {
      reject_unknown(entry, "context.sets[]", {"prob", "actions"});
      const double prob = entry.value("prob", 0.0);
      std::vector<Action> acts;
      for (const auto& a : entry.at("actions")) acts.emplace_back(parse_vec(a, "context.sets[].actions"));
      spec.support.emplace_back(prob, ActionSet(std::move(acts)));
    }
  } else if (kind == "sleeping") {
    spec.kind = ContextKind::sleeping;
    spec.q = j.value("q", 1.0);
  } else if (kind == "ball") {
    spec.kind = ContextKind::ball;
    spec.K = j.value("K", 1);
  } else {
    fail("context.kind: unknown value \"" + kind + "\"");
  }
  return spec;
}

AdversarySpec parse_adversary(const json& j, int d) {
  AdversarySpec spec;
  spec.d = d;
  reject_unknown(j, "adversary",
                 {"kind", "vectors", "switch_rounds", "omega", "epsilon", "misspec_mode"});
  const std::string kind = j.value("kind", "fixed");
  if (kind == "fixed")
    spec.kind = AdversaryKind::fixed;
  else if (kind == "piecewise")
    spec.kind = AdversaryKind::piecewise;
  else if (kind == "drift")
    spec.kind = AdversaryKind::drift;
  else
    fail("adversary.kind: unknown value \"" + kind + "\"");
  if (j.contains("vectors"))
    for (const auto& v : j.at("vectors")) spec.vectors.push_back(parse_vec(v, "adversary.vectors"));
  if (j.contains("switch_rounds"))
    for (const auto& v : j.at("switch_rounds")) spec.switch_rounds.push_back(v.get<long>());
  spec.omega = j.value("omega", 0.0);
  spec.epsilon = j.value("epsilon", 0.0);
  const std::string mode = j.value("misspec_mode", "none");
  if (mode == "none")
    spec.misspec = MisspecMode::none;
  else if (mode == "radial")
    spec.misspec = MisspecMode::radial;
  else if (mode == "sign")
    spec.misspec = MisspecMode::sign;
  else
    fail("adversary.misspec_mode: unknown value \"" + mode + "\"");
  return spec;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(std::string("config: invalid JSON: ") + e.what());
  }
  reject_unknown(j, "",
                 {"algorithm", "d", "T", "seeds", "context", "adversary", "feedback",
                  "overrides", "out"});
  ExperimentConfig cfg;
  if (!j.contains("algorithm")) fail("algorithm: required");
  cfg.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  cfg.d = j.value("d", 1);
  cfg.T = j.value("T", 1L);
  if (j.contains("seeds"))
    for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
  if (j.contains("context")) cfg.context = parse_context(j.at("context"), cfg.d);
  else {
    cfg.context.kind = ContextKind::sleeping;
    cfg.context.d = cfg.d;
    cfg.context.q = 1.0;
  }
  if (j.contains("adversary")) cfg.adversary = parse_adversary(j.at("adversary"), cfg.d);
  else {
    cfg.adversary.kind = AdversaryKind::fixed;
    cfg.adversary.d = cfg.d;
    cfg.adversary.vectors = {Vec(cfg.d, 0.0)};
  }
  if (j.contains("feedback")) {
    const json& f = j.at("feedback");
    reject_unknown(f, "feedback", {"kind"});
    const std::string kind = f.value("kind", "two_point");
    if (kind == "two_point")
      cfg.feedback.kind = FeedbackKind::two_point;
    else if (kind == "exact")
      cfg.feedback.kind = FeedbackKind::exact;
    else
      fail("feedback.kind: unknown value \"" + kind + "\"");
  }
  if (j.contains("overrides")) {
    const json& o = j.at("overrides");
    reject_unknown(o, "overrides",
                   {"grid_step", "tol", "max_iter", "epsilon", "reservoir", "beta_scale",
                    "eta_scale", "alpha_scale", "policy_cap"});
    cfg.overrides.grid_step = o.value("grid_step", cfg.overrides.grid_step);
    cfg.overrides.tol = o.value("tol", cfg.overrides.tol);
    cfg.overrides.max_iter = o.value("max_iter", cfg.overrides.max_iter);
    cfg.overrides.epsilon = o.value("epsilon", cfg.overrides.epsilon);
    cfg.overrides.reservoir = o.value("reservoir", cfg.overrides.reservoir);
    cfg.overrides.beta_scale = o.value("beta_scale", cfg.overrides.beta_scale);
    cfg.overrides.eta_scale = o.value("eta_scale", cfg.overrides.eta_scale);
    cfg.overrides.alpha_scale = o.value("alpha_scale", cfg.overrides.alpha_scale);
    cfg.overrides.policy_cap = o.value("policy_cap", cfg.overrides.policy_cap);
  }
  cfg.out_path = j.value("out", std::string());
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("config: cannot open file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  switch (cfg.algorithm) {
    case AlgorithmKind::logdet_ftrl: j["algorithm"] = "logdet_ftrl"; break;
    case AlgorithmKind::exp4: j["algorithm"] = "exp4"; break;
    case AlgorithmKind::misspec_ftrl: j["algorithm"] = "misspec_ftrl"; break;
    case AlgorithmKind::corral: j["algorithm"] = "corral"; break;
    case AlgorithmKind::uniform_random: j["algorithm"] = "uniform_random"; break;
  }
  j["d"] = cfg.d;
  j["T"] = cfg.T;
  j["seeds"] = cfg.seeds;
  json ctx;
  switch (cfg.context.kind) {
    case ContextKind::finite_support: {
      ctx["kind"] = "finite_support";
      json sets = json::array();
      for (const auto& [p, set] : cfg.context.support) {
        json e;
        e["prob"] = p;
        json acts = json::array();
        for (const Action& a : set.actions()) acts.push_back(a.coords);
        e["actions"] = acts;
        sets.push_back(e);
      }
      ctx["sets"] = sets;
      break;
    }
    case ContextKind::sleeping:
      ctx["kind"] = "sleeping";
      ctx["q"] = cfg.context.q;
      break;
    case ContextKind::ball:
      ctx["kind"] = "ball";
      ctx["K"] = cfg.context.K;
      break;
  }
  j["context"] = ctx;
  json adv;
  switch (cfg.adversary.kind) {
    case AdversaryKind::fixed: adv["kind"] = "fixed"; break;
    case AdversaryKind::piecewise: adv["kind"] = "piecewise"; break;
    case AdversaryKind::drift: adv["kind"] = "drift"; break;
  }
  adv["vectors"] = cfg.adversary.vectors;
  if (!cfg.adversary.switch_rounds.empty()) adv["switch_rounds"] = cfg.adversary.switch_rounds;
  if (cfg.adversary.kind == AdversaryKind::drift) adv["omega"] = cfg.adversary.omega;
  adv["epsilon"] = cfg.adversary.epsilon;
  switch (cfg.adversary.misspec) {
    case MisspecMode::none: adv["misspec_mode"] = "none"; break;
    case MisspecMode::radial: adv["misspec_mode"] = "radial"; break;
    case MisspecMode::sign: adv["misspec_mode"] = "sign"; break;
  }
  j["adversary"] = adv;
  j["feedback"] = {{"kind", cfg.feedback.kind == FeedbackKind::two_point ? "two_point" : "exact"}};
  j["overrides"] = {{"grid_step", cfg.overrides.grid_step},
                    {"tol", cfg.overrides.tol},
                    {"max_iter", cfg.overrides.max_iter},
                    {"epsilon", cfg.overrides.epsilon},
                    {"reservoir", cfg.overrides.reservoir},
                    {"beta_scale", cfg.overrides.beta_scale},
                    {"eta_scale", cfg.overrides.eta_scale},
                    {"alpha_scale", cfg.overrides.alpha_scale},
                    {"policy_cap", cfg.overrides.policy_cap}};
  if (!cfg.out_path.empty()) j["out"] = cfg.out_path;
  return j.dump(2) + "\n";
}

}  // namespace lcb
