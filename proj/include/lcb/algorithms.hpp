#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "lcb/design.hpp"
#include "lcb/estimators.hpp"
#include "lcb/rng.hpp"

namespace lcb {

// Common select/update round protocol. select and update must alternate;
// cancel() rolls back a pending round whose feedback never arrived (used by
// the meta layer), leaving learner state untouched.
class Bandit {
 public:
  virtual ~Bandit() = default;
  virtual std::pair<ActionDistribution, std::size_t> select(const ActionSet& a) = 0;
  virtual void update(double ell) = 0;
  virtual void cancel() = 0;
};

// Follow-the-regularized-leader over lifted covariance matrices with the
// log-determinant barrier. One FTRL per context, materialized lazily: the
// round-t policy for any context minimizes
//   <Cov-hat(p), Z_t> + F(Cov-hat(p)) / eta_t,
// with Z_t the running sum of lifted loss estimates minus bonuses.
struct LogdetFtrlOptions {
  double solver_tol = kDefaultFwTol;
  long solver_max_iter = 0;        // 0 selects the size-based default
  std::size_t reservoir = 0;       // 0 keeps exact context counts
};

class LogdetFtrl : public Bandit {
 public:
  using Options = LogdetFtrlOptions;

  LogdetFtrl(Schedules schedules, std::uint64_t seed, Options opt = {});

  std::pair<ActionDistribution, std::size_t> select(const ActionSet& a) override;
  void update(double ell) override;
  void cancel() override;

  long round() const { return round_; }
  const Mat& accumulated() const { return z_; }
  // Statistics computed for the current pending round (round >= 2 only).
  const EstimatorState& pending_stats() const;

 private:
  ActionDistribution resolve(const ActionSet& a);

  Schedules schedules_;
  Options opt_;
  Mat z_;
  ContextStore store_;
  long round_ = 1;
  Rng rng_;

  struct Pending {
    EstimatorState stats;
    ActionSet context;
    ActionDistribution dist;
    std::size_t action_index;
  };
  std::optional<Pending> pending_;
  // Per-round cache of FTRL solutions keyed by context id; cleared on update.
  std::unordered_map<std::uint64_t, ActionDistribution> round_cache_;
  // Last solved distribution per context id, used to warm-start the next
  // round's solve for the same context. Pruned when it outgrows the store.
  std::unordered_map<std::uint64_t, Vec> warm_;
};

// theta -> argmin_{a in A} <a, theta>, ties to the lowest action index.
struct LinearPolicy {
  Vec theta;
  std::size_t act(const ActionSet& a) const;
};

// Axis-aligned grid over [-T, T]^d with the given spacing. Refuses nets
// larger than cap with a message carrying the would-be size.
std::vector<LinearPolicy> build_linear_policy_net(int d, long T, double grid_step,
                                                  std::size_t cap = 1000000);

// Exponential weights over a finite policy set with a G-optimal exploration
// mixture. Weights are kept in log space with max-subtraction; the loss of
// every policy is estimated through the pseudo-inverse of the mixture
// second-moment matrix.
struct Exp4Options {
  double design_tol = 1e-3;  // absolute duality gap of the exploration design
  bool parallel = false;     // per-policy loops through parallel_for
};

class Exp4 : public Bandit {
 public:
  using Options = Exp4Options;

  // Defaults gamma = 2 d sqrt(ln T / T) (clamped to 1) and
  // eta = sqrt(ln T / T) apply when the arguments are <= 0.
  Exp4(std::vector<LinearPolicy> policies, int d, long T, std::uint64_t seed,
       double gamma = 0.0, double eta = 0.0, Options opt = {});

  std::pair<ActionDistribution, std::size_t> select(const ActionSet& a) override;
  void update(double ell) override;
  void cancel() override;

  double gamma() const { return gamma_; }
  double eta() const { return eta_; }
  Vec policy_probs() const;  // softmax of the log weights
  double last_max_loss_estimate() const { return last_max_loss_estimate_; }

 private:
  std::vector<LinearPolicy> policies_;
  int d_;
  Vec log_weights_;
  double gamma_, eta_;
  Options opt_;
  Rng rng_;
  double last_max_loss_estimate_ = 0.0;

  struct Pending {
    ActionSet context;
    ActionDistribution mixture;
    std::vector<std::size_t> policy_choice;  // per policy, action index
    Mat mixture_second_moment;
    std::size_t action_index;
  };
  std::optional<Pending> pending_;
};

// Plays uniformly at random; the baseline for regret comparisons.
class UniformRandom : public Bandit {
 public:
  explicit UniformRandom(std::uint64_t seed) : rng_(seed) {}
  std::pair<ActionDistribution, std::size_t> select(const ActionSet& a) override;
  void update(double ell) override;
  void cancel() override { pending_ = false; }

 private:
  Rng rng_;
  bool pending_ = false;
};

using BanditFactory = std::function<std::unique_ptr<Bandit>(long horizon, std::uint64_t seed)>;

// Anytime wrapper: epoch k spans 2^k rounds and runs a fresh fixed-horizon
// instance built for T = 2^k. Epoch boundaries are data-independent.
class DoublingWrapper : public Bandit {
 public:
  DoublingWrapper(BanditFactory factory, std::uint64_t seed);

  std::pair<ActionDistribution, std::size_t> select(const ActionSet& a) override;
  void update(double ell) override;
  void cancel() override;

  long epoch() const { return epoch_; }
  long instances_created() const { return instances_created_; }

 private:
  void ensure_instance();

  BanditFactory factory_;
  std::uint64_t seed_;
  std::unique_ptr<Bandit> current_;
  long epoch_ = 0;
  long rounds_in_epoch_ = 0;   // completed rounds of the current epoch
  long epoch_length_ = 1;
  long instances_created_ = 0;
};

}  // namespace lcb
