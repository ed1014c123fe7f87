#pragma once

#include <map>
#include <memory>
#include <optional>

#include "lcb/algorithms.hpp"

namespace lcb {

// theta_j = 2^{-j} eps T + 4 sqrt(2^{-j} T ln T) + 8 ln T.
double stabilise_theta(int j, double epsilon, long T);

// Routing decision for a revealed probability w.
struct RouteDecision {
  bool skip = false;  // w <= 1/T: play an arbitrary policy, update nothing
  int bucket = 0;     // j with w in (2^{-j-1}, 2^{-j}]
};
RouteDecision stabilise_route(double w, long T);

// Forwarding probability 2^{-j-1} / w (at most 1 for in-bucket w).
double stabilise_forward_prob(int j, double w);

// Base algorithms consumed by STABILISE take the robustness budget theta;
// the factory also receives the sub-instance seed.
using ThetaBanditFactory =
    std::function<std::unique_ptr<Bandit>(double theta, std::uint64_t seed)>;

// Equalizes the feedback probability seen by each sub-instance: rounds are
// routed to instance j by the bucket of w_t, and received feedback is
// forwarded with probability 2^{-j-1}/w_t so the unconditional rate is
// exactly 2^{-j-1}. Instances are materialized lazily per bucket.
class Stabilise {
 public:
  Stabilise(double epsilon, long T, ThetaBanditFactory factory, std::uint64_t seed);

  // One protocol round: w revealed, then the action to play.
  std::pair<ActionDistribution, std::size_t> select(const ActionSet& a, double w);
  // Feedback was delivered by the environment for the played action.
  void feedback(double ell);
  // No feedback this round.
  void no_feedback();

  // Simulation helper for dispatch tests: draws the reception coin (with
  // probability w) and then the forward coin from the owned rng, in that
  // order, calling loss() only when feedback is actually consumed.
  void run_protocol_round(const ActionSet& a, double w, const std::function<double()>& loss);

  long assigned_rounds(int j) const;
  long fed_rounds(int j) const;
  long skipped_rounds() const { return skipped_; }

 private:
  Bandit* instance(int j);

  double epsilon_;
  long T_;
  ThetaBanditFactory factory_;
  std::uint64_t seed_;
  Rng rng_;
  std::map<int, std::unique_ptr<Bandit>> instances_;
  std::map<int, long> assigned_, fed_;
  long skipped_ = 0;

  struct Pending {
    bool skip;
    int bucket;
    double w;
  };
  std::optional<Pending> pending_;
};

// Log-barrier FTRL master over M arms on the clamped simplex
// {w in Delta(M) : w_i >= 1/T}. Loss fed to the master is the importance
// weighted arm loss minus the stability bonus
// r_{t,i} = c1' (sqrt(rho_{t,i} T) - sqrt(rho_{t-1,i} T)),
// rho_{t,i} = max(rho_{t-1,i}, 1/w_{t,i}), rho_0 = M.
class CorralMaster {
 public:
  CorralMaster(int arms, long T, double c1_prime, double eta = 0.0);

  // Exact minimizer of <w, L> + (1/eta) sum_i log(1/w_i) over the clamped
  // simplex, by bisection on the normalization multiplier.
  Vec weights() const;

  void update(int chosen, double z, const Vec& w);

  int arms() const { return m_; }
  double eta() const { return eta_; }
  double rho(int i) const { return rho_[i]; }
  double bonus_total(int i) const { return bonus_total_[i]; }
  double c1_prime() const { return c1_prime_; }
  double cumulative(int i) const { return cumulative_[i]; }

 private:
  int m_;
  long T_;
  double c1_prime_;
  double eta_;
  Vec cumulative_;   // sum of z-hat - r
  Vec rho_;
  Vec bonus_total_;  // running sum of r_{t,i}
};

// Full composition for unknown misspecification: M = ceil(log2 T) arms, arm i
// hypothesizing eps T = 2^i, each arm a STABILISE over doubling-wrapped
// known-eps instances.
struct CorralBanditOptions {
  double c1_prime = 0.0;  // 0 selects (d^2 ln T + sqrt(d)) sqrt(ln T)
  LogdetFtrlOptions base;
};

class CorralBandit : public Bandit {
 public:
  using Options = CorralBanditOptions;

  CorralBandit(int d, long T, std::uint64_t seed, Options opt = {});

  std::pair<ActionDistribution, std::size_t> select(const ActionSet& a) override;
  void update(double ell) override;
  void cancel() override;

  const CorralMaster& master() const { return master_; }

 private:
  int d_;
  long T_;
  CorralMaster master_;
  std::vector<std::unique_ptr<Stabilise>> arms_;
  Rng rng_;

  struct Pending {
    Vec w;
    int chosen;
  };
  std::optional<Pending> pending_;
};

}  // namespace lcb
