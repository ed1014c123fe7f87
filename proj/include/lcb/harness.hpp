#pragma once

#include <string>

#include "lcb/environments.hpp"
#include "lcb/estimators.hpp"
#include "lcb/meta.hpp"

namespace lcb {

enum class AlgorithmKind { logdet_ftrl, exp4, misspec_ftrl, corral, uniform_random };

struct ScheduleOverrides {
  double grid_step = 1.0;     // exp4 policy net spacing
  double tol = kDefaultFwTol; // solver tolerance
  long max_iter = 0;          // 0 selects the size-based default
  double epsilon = 0.0;       // misspec_ftrl schedule level
  std::size_t reservoir = 0;  // 0 = exact store (set for ball contexts)
  double beta_scale = 1.0;    // schedule experiment knobs; 1 = published values
  double eta_scale = 1.0;
  double alpha_scale = 1.0;   // eta_scale * alpha_scale must stay <= 1
  std::size_t policy_cap = 1000000;
};

struct ExperimentConfig {
  AlgorithmKind algorithm = AlgorithmKind::logdet_ftrl;
  int d = 1;
  long T = 1;
  std::vector<std::uint64_t> seeds;
  ContextSpec context;
  AdversarySpec adversary;
  FeedbackModel feedback;
  ScheduleOverrides overrides;
  std::string out_path;

  void validate() const;  // throws std::invalid_argument naming the field
};

// One CSV row; the cumulative columns are running sums over the run.
struct RoundTrace {
  long t;
  std::uint64_t context_id;
  std::size_t action_index;
  double realized_loss;
  double expected_loss;
  double cum_expected_loss;
  double cum_comparator_loss;
  double cum_regret;
};

struct RegretReport {
  double comparator_loss = 0.0;
  double learner_loss = 0.0;
  double regret = 0.0;
  Vec curve;  // cumulative regret after each round
};

struct SeedResult {
  std::uint64_t seed;
  std::vector<RoundTrace> trace;
  RegretReport report;
};

// Runs the configured algorithm round by round for every seed; deterministic
// per (config, seed). Seeds execute through parallel_for.
std::vector<SeedResult> run_experiment(const ExperimentConfig& cfg, bool parallel = true);

// Hindsight best-fixed-policy loss: rounds grouped by context id, each group
// contributing min_a sum_{t in group} f_t(a) evaluated on the first-seen
// representative of the context.
double comparator_loss(const std::vector<ActionSet>& contexts,
                       const std::function<double(long t, const Action&)>& expected_loss);

// Linear losses: f_t(a) = <a, y_t>.
double comparator_loss(const std::vector<ActionSet>& contexts, const std::vector<Vec>& ys);

// CSV schema: t,context_id,action_index,realized_loss,expected_loss,
// cum_expected_loss,cum_comparator_loss,cum_regret with 17 significant digits.
std::string trace_to_csv(const std::vector<RoundTrace>& trace);
std::vector<RoundTrace> parse_trace_csv(const std::string& text);
void write_file(const std::string& path, const std::string& content);

// JSON config file; unknown keys are rejected by name, defaults apply to
// omitted optional fields.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

std::unique_ptr<Bandit> make_algorithm(const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace lcb
