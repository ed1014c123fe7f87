#include "lcb/harness.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "lcb/parallel.hpp"

namespace lcb {

void ExperimentConfig::validate() const {
  if (d < 1) throw std::invalid_argument("d: must be >= 1");
  if (T < 1) throw std::invalid_argument("T: must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("seeds: must be nonempty");
  if (context.d != d) throw std::invalid_argument("context.d: must equal d");
  if (adversary.d != d) throw std::invalid_argument("adversary.d: must equal d");
  context.validate();
  adversary.validate();
  if (overrides.grid_step <= 0.0) throw std::invalid_argument("overrides.grid_step: must be > 0");
  if (overrides.tol <= 0.0) throw std::invalid_argument("overrides.tol: must be > 0");
  if (overrides.epsilon < 0.0) throw std::invalid_argument("overrides.epsilon: must be >= 0");
  if (overrides.beta_scale <= 0.0) throw std::invalid_argument("overrides.beta_scale: must be > 0");
  if (overrides.eta_scale <= 0.0) throw std::invalid_argument("overrides.eta_scale: must be > 0");
  if (overrides.alpha_scale <= 0.0)
    throw std::invalid_argument("overrides.alpha_scale: must be > 0");
  if (overrides.eta_scale * overrides.alpha_scale > 1.0 + 1e-12)
    throw std::invalid_argument(
        "overrides.eta_scale * overrides.alpha_scale: must be <= 1 to keep eta_t * alpha_t <= 1/(64 t)");
}

std::unique_ptr<Bandit> make_algorithm(const ExperimentConfig& cfg, std::uint64_t seed) {
  const std::size_t reservoir =
      cfg.overrides.reservoir > 0
          ? cfg.overrides.reservoir
          : (cfg.context.kind == ContextKind::ball ? 64 : 0);
  LogdetFtrl::Options ftrl_opt;
  ftrl_opt.solver_tol = cfg.overrides.tol;
  ftrl_opt.solver_max_iter = cfg.overrides.max_iter;
  ftrl_opt.reservoir = reservoir;
  switch (cfg.algorithm) {
    case AlgorithmKind::logdet_ftrl:
    case AlgorithmKind::misspec_ftrl: {
      Schedules s;
      s.d = cfg.d;
      s.T = cfg.T;
      s.epsilon = cfg.algorithm == AlgorithmKind::misspec_ftrl ? cfg.overrides.epsilon : 0.0;
      s.beta_scale = cfg.overrides.beta_scale;
      s.eta_scale = cfg.overrides.eta_scale;
      s.alpha_scale = cfg.overrides.alpha_scale;
      return std::make_unique<LogdetFtrl>(s, seed, ftrl_opt);
    }
    case AlgorithmKind::exp4: {
      auto net = build_linear_policy_net(cfg.d, cfg.T, cfg.overrides.grid_step,
                                         cfg.overrides.policy_cap);
      return std::make_unique<Exp4>(std::move(net), cfg.d, cfg.T, seed);
    }
    case AlgorithmKind::corral: {
      CorralBandit::Options opt;
      opt.base = ftrl_opt;
      return std::make_unique<CorralBandit>(cfg.d, cfg.T, seed, opt);
    }
    case AlgorithmKind::uniform_random:
      return std::make_unique<UniformRandom>(seed);
  }
  throw std::logic_error("make_algorithm: unknown algorithm");
}

namespace {

// Running hindsight comparator over the realized prefix: one accumulator per
// distinct context holding per-action loss sums on the first-seen
// representative ordering.
class PrefixComparator {
 public:
  // Returns the comparator total after adding round t with context a. The
  // total is re-summed over groups in ascending id order, so it is bitwise
  // reproducible and matches an enumeration oracle using the same order.
  double add(const ActionSet& a, long t,
             const std::function<double(long, const Action&)>& f) {
    auto it = groups_.find(a.id());
    if (it == groups_.end()) {
      it = groups_.emplace(a.id(), Group{a, Vec(a.size(), 0.0), 0.0}).first;
    }
    Group& g = it->second;
    for (std::size_t k = 0; k < g.rep.size(); ++k) g.cum[k] += f(t, g.rep[k]);
    g.best = g.cum[0];
    for (double v : g.cum) g.best = std::min(g.best, v);
    double total = 0.0;
    for (const auto& [id, grp] : groups_) total += grp.best;
    return total;
  }

 private:
  struct Group {
    ActionSet rep;
    Vec cum;
    double best;
  };
  std::map<std::uint64_t, Group> groups_;
};

SeedResult run_one_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  // Independent deterministic streams for the environment and the learner.
  Rng env_rng(Rng::splitmix64(seed ^ 0x9E3779B97F4A7C15ULL));
  auto alg = make_algorithm(cfg, Rng::splitmix64(seed ^ 0x2545F4914F6CDD1DULL));

  SeedResult res;
  res.seed = seed;
  res.trace.reserve(cfg.T);
  res.report.curve.reserve(cfg.T);
  PrefixComparator comparator;
  auto f = [&](long t, const Action& a) { return misspec_value(cfg.adversary, a, t); };
  double cum_expected = 0.0;
  for (long t = 1; t <= cfg.T; ++t) {
    const ActionSet ctx = draw_context(cfg.context, env_rng);
    const auto [dist, idx] = alg->select(ctx);
    const double expected = f(t, ctx[idx]);
    const double realized = sample_feedback(cfg.feedback, expected, env_rng);
    alg->update(realized);
    cum_expected += expected;
    const double cum_comp = comparator.add(ctx, t, f);
    RoundTrace row;
    row.t = t;
    row.context_id = ctx.id();
    row.action_index = idx;
    row.realized_loss = realized;
    row.expected_loss = expected;
    row.cum_expected_loss = cum_expected;
    row.cum_comparator_loss = cum_comp;
    row.cum_regret = cum_expected - cum_comp;
    res.trace.push_back(row);
    res.report.curve.push_back(row.cum_regret);
  }
  res.report.learner_loss = cum_expected;
  res.report.comparator_loss = res.trace.empty() ? 0.0 : res.trace.back().cum_comparator_loss;
  res.report.regret = res.report.learner_loss - res.report.comparator_loss;
  return res;
}

}  // namespace

std::vector<SeedResult> run_experiment(const ExperimentConfig& cfg, bool parallel) {
  cfg.validate();
  std::vector<SeedResult> results(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), parallel,
               [&](std::size_t i) { results[i] = run_one_seed(cfg, cfg.seeds[i]); });
  return results;
}

double comparator_loss(const std::vector<ActionSet>& contexts,
                       const std::function<double(long t, const Action&)>& expected_loss) {
  PrefixComparator comp;
  double total = 0.0;
  for (std::size_t i = 0; i < contexts.size(); ++i)
    total = comp.add(contexts[i], static_cast<long>(i + 1), expected_loss);
  return total;
}

double comparator_loss(const std::vector<ActionSet>& contexts, const std::vector<Vec>& ys) {
  if (contexts.size() != ys.size())
    throw std::invalid_argument("comparator_loss: mismatched sequence lengths");
  return comparator_loss(contexts, [&](long t, const Action& a) {
    return dot(a.coords, ys[static_cast<std::size_t>(t - 1)]);
  });
}

namespace {

void append_g17(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string trace_to_csv(const std::vector<RoundTrace>& trace) {
  std::string out =
      "t,context_id,action_index,realized_loss,expected_loss,cum_expected_loss,"
      "cum_comparator_loss,cum_regret\n";
  char head[96];
  for (const RoundTrace& r : trace) {
    std::snprintf(head, sizeof(head), "%ld,%" PRIu64 ",%zu,", r.t, r.context_id,
                  r.action_index);
    out += head;
    append_g17(out, r.realized_loss);
    out += ',';
    append_g17(out, r.expected_loss);
    out += ',';
    append_g17(out, r.cum_expected_loss);
    out += ',';
    append_g17(out, r.cum_comparator_loss);
    out += ',';
    append_g17(out, r.cum_regret);
    out += '\n';
  }
  return out;
}

std::vector<RoundTrace> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: empty file");
  const std::string expect =
      "t,context_id,action_index,realized_loss,expected_loss,cum_expected_loss,"
      "cum_comparator_loss,cum_regret";
  if (line != expect) throw std::runtime_error("trace: unexpected header: " + line);
  std::vector<RoundTrace> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        fields.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() != 8)
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected 8 fields, got " +
                               std::to_string(fields.size()));
    auto bad = [&](const char* name) {
      return std::runtime_error("trace line " + std::to_string(line_no) + ": bad field " + name);
    };
    RoundTrace r;
    try {
      r.t = std::stol(fields[0]);
    } catch (...) { throw bad("t"); }
    try {
      r.context_id = std::stoull(fields[1]);
    } catch (...) { throw bad("context_id"); }
    try {
      r.action_index = static_cast<std::size_t>(std::stoul(fields[2]));
    } catch (...) { throw bad("action_index"); }
    auto to_d = [&](int i, const char* name) {
      try {
        return std::stod(fields[i]);
      } catch (...) { throw bad(name); }
    };
    r.realized_loss = to_d(3, "realized_loss");
    r.expected_loss = to_d(4, "expected_loss");
    r.cum_expected_loss = to_d(5, "cum_expected_loss");
    r.cum_comparator_loss = to_d(6, "cum_comparator_loss");
    r.cum_regret = to_d(7, "cum_regret");
    rows.push_back(r);
  }
  return rows;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace lcb
