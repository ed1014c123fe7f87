#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>

#include "lcb/core.hpp"
#include "lcb/rng.hpp"
#include "lcb/types.hpp"

namespace lcb {

// Schedule parameters of the FTRL algorithm. epsilon > 0 selects the
// known-misspecification variant; epsilon = 0 reduces to the base schedules
// through the same arithmetic, so the two configurations are bit-identical.
// The *_scale knobs default to 1 (the published constants) and exist only as
// experiment overrides; eta_scale * alpha_scale <= 1 keeps the product
// alpha_t * eta_t <= 1/(64 t) intact.
struct Schedules {
  int d = 1;
  long T = 1;
  double epsilon = 0.0;
  double beta_scale = 1.0;
  double eta_scale = 1.0;
  double alpha_scale = 1.0;

  // beta_t = 100 (d+1)^3 ln(3T) / (t-1), t >= 2.
  double beta(long t) const;
  // alpha_t = d/sqrt(t) + epsilon/sqrt(d).
  double alpha(long t) const;
  // eta_t = 1 / (64 (d sqrt(t) + (epsilon/sqrt(d)) t)); alpha_t * eta_t = 1/(64 t).
  double eta(long t) const;
};

// Multiset of past contexts keyed by canonical id. `counts` mode stores one
// entry per distinct context with its multiplicity (exact for finite-support
// distributions); `reservoir` mode keeps a uniform subsample of fixed size
// for unbounded context supports.
class ContextStore {
 public:
  ContextStore() = default;
  // reservoir_size = 0 keeps the exact per-id counts.
  ContextStore(std::size_t reservoir_size, std::uint64_t seed);

  void add(const ActionSet& a);
  long total() const { return total_; }
  bool empty() const { return total_ == 0; }

  // Visit stored contexts with weights summing to 1, in a deterministic
  // order (insertion order for counts mode, slot order for reservoir mode).
  void for_each(const std::function<void(const ActionSet&, double weight)>& fn) const;

 private:
  long total_ = 0;
  // counts mode
  std::vector<std::pair<ActionSet, long>> entries_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  // reservoir mode
  std::size_t reservoir_size_ = 0;
  std::vector<ActionSet> reservoir_;
  std::optional<Rng> reservoir_rng_;
};

// Round-t statistics built from the store under the current policy.
struct EstimatorState {
  Vec x_hat;             // mean feature estimate
  Mat H_hat;             // d x d centered second moment
  Mat Sigma_hat;         // H_hat + beta I
  Mat lifted_H_hat;      // (d+1) x (d+1) mean lifted covariance
  Mat lifted_Sigma_hat;  // lifted_H_hat + beta I
  double beta = 0.0;
  long round = 1;

  // Round 1 carries the zero-inverse rule: the loss estimate and bonus vanish.
  static EstimatorState round_one(int d);
};

using PolicyResolver = std::function<ActionDistribution(const ActionSet&)>;

// Evaluates the resolver once per distinct stored context and averages with
// the stored weights. Errors on an empty store.
EstimatorState policy_stats(const PolicyResolver& resolver, const ContextStore& store, long t,
                            const Schedules& s);

// y-hat = Sigma-hat^{-1} (a - x-hat) * ell; the zero vector at round 1.
// The output is not constrained to the unit ball.
LossVector loss_estimate(const EstimatorState& state, const Action& a, double ell);

// Lifting of the estimate, same block structure as lifted_loss.
LiftedLoss lifted_loss_estimate(const LossVector& y_hat);

// alpha * lifted Sigma-hat^{-1}; the zero matrix at round 1.
Mat bonus_matrix(double alpha, const EstimatorState& state);

}  // namespace lcb
