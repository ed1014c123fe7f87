#include "lcb/estimators.hpp"

#include <cmath>

namespace lcb {

double Schedules::beta(long t) const {
  if (t < 2) throw std::invalid_argument("Schedules::beta: defined for t >= 2");
  const double dp1 = static_cast<double>(d + 1);
  return beta_scale * 100.0 * dp1 * dp1 * dp1 * std::log(3.0 * static_cast<double>(T)) /
         static_cast<double>(t - 1);
}

double Schedules::alpha(long t) const {
  if (t < 1) throw std::invalid_argument("Schedules::alpha: defined for t >= 1");
  const double dd = static_cast<double>(d);
  return alpha_scale * (dd / std::sqrt(static_cast<double>(t)) + epsilon / std::sqrt(dd));
}

double Schedules::eta(long t) const {
  if (t < 1) throw std::invalid_argument("Schedules::eta: defined for t >= 1");
  const double dd = static_cast<double>(d);
  const double tt = static_cast<double>(t);
  return eta_scale / (64.0 * (dd * std::sqrt(tt) + (epsilon / std::sqrt(dd)) * tt));
}

ContextStore::ContextStore(std::size_t reservoir_size, std::uint64_t seed)
    : reservoir_size_(reservoir_size) {
  if (reservoir_size_ > 0) reservoir_rng_.emplace(seed);
}

void ContextStore::add(const ActionSet& a) {
  ++total_;
  if (reservoir_size_ == 0) {
    auto it = index_.find(a.id());
    if (it != index_.end()) {
      ++entries_[it->second].second;
    } else {
      index_.emplace(a.id(), entries_.size());
      entries_.emplace_back(a, 1);
    }
    return;
  }
  // Vitter's algorithm R.
  if (reservoir_.size() < reservoir_size_) {
    reservoir_.push_back(a);
    return;
  }
  const std::size_t j = reservoir_rng_->uniform_index(static_cast<std::size_t>(total_));
  if (j < reservoir_size_) reservoir_[j] = a;
}

void ContextStore::for_each(
    const std::function<void(const ActionSet&, double weight)>& fn) const {
  if (reservoir_size_ == 0) {
    const double denom = static_cast<double>(total_);
    for (const auto& [set, count] : entries_) fn(set, static_cast<double>(count) / denom);
  } else {
    const double denom = static_cast<double>(reservoir_.size());
    for (const ActionSet& set : reservoir_) fn(set, 1.0 / denom);
  }
}

EstimatorState EstimatorState::round_one(int d) {
  EstimatorState st;
  st.x_hat.assign(d, 0.0);
  st.H_hat = Mat(d, d);
  st.Sigma_hat = Mat(d, d);
  st.lifted_H_hat = Mat(d + 1, d + 1);
  st.lifted_Sigma_hat = Mat(d + 1, d + 1);
  st.beta = 0.0;
  st.round = 1;
  return st;
}

EstimatorState policy_stats(const PolicyResolver& resolver, const ContextStore& store, long t,
                            const Schedules& s) {
  if (store.empty()) throw std::runtime_error("policy_stats: empty context store");
  if (store.total() != t - 1)
    throw std::invalid_argument("policy_stats: store holds a different number of rounds");
  const int d = s.d;

  struct Resolved {
    const ActionSet* set;
    ActionDistribution dist;
    double weight;
  };
  std::vector<Resolved> resolved;
  store.for_each([&](const ActionSet& set, double weight) {
    resolved.push_back({&set, resolver(set), weight});
  });

  EstimatorState st;
  st.round = t;
  st.beta = s.beta(t);
  st.x_hat.assign(d, 0.0);
  for (const Resolved& r : resolved) {
    const Vec m = mean_action(r.dist, *r.set);
    for (int i = 0; i < d; ++i) st.x_hat[i] += r.weight * m[i];
  }
  st.H_hat = Mat(d, d);
  st.lifted_H_hat = Mat(d + 1, d + 1);
  for (const Resolved& r : resolved) {
    const ActionSet& set = *r.set;
    for (std::size_t k = 0; k < set.size(); ++k) {
      const double w = r.weight * r.dist.weights[k];
      if (w == 0.0) continue;
      const Vec& a = set[k].coords;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          st.H_hat(i, j) += w * (a[i] - st.x_hat[i]) * (a[j] - st.x_hat[j]);
      for (int i = 0; i <= d; ++i) {
        const double ai = (i == d) ? 1.0 : a[i];
        for (int j = 0; j <= d; ++j) {
          const double aj = (j == d) ? 1.0 : a[j];
          st.lifted_H_hat(i, j) += w * ai * aj;
        }
      }
    }
  }
  st.H_hat.symmetrize();
  st.lifted_H_hat.symmetrize();
  st.Sigma_hat = st.H_hat + Mat::identity(d) * st.beta;
  st.lifted_Sigma_hat = st.lifted_H_hat + Mat::identity(d + 1) * st.beta;
  return st;
}

LossVector loss_estimate(const EstimatorState& state, const Action& a, double ell) {
  if (std::abs(ell) > 1.0 + 1e-9)
    throw std::invalid_argument("loss_estimate: |ell| exceeds 1");
  const std::size_t d = a.dim();
  if (state.round <= 1) return LossVector{Vec(d, 0.0)};
  Vec centered(d);
  for (std::size_t i = 0; i < d; ++i) centered[i] = a.coords[i] - state.x_hat[i];
  Cholesky chol(state.Sigma_hat);
  if (!chol.ok())
    throw SingularOrIndefinite("loss_estimate: Sigma-hat is not positive definite");
  Vec y = chol.solve(centered);
  for (double& v : y) v *= ell;
  return LossVector{std::move(y)};
}

LiftedLoss lifted_loss_estimate(const LossVector& y_hat) { return lifted_loss(y_hat.coords); }

Mat bonus_matrix(double alpha, const EstimatorState& state) {
  if (alpha < 0.0) throw std::invalid_argument("bonus_matrix: alpha must be nonnegative");
  const std::size_t n = state.lifted_Sigma_hat.rows();
  if (state.round <= 1 || alpha == 0.0) return Mat(n, n);
  Cholesky chol(state.lifted_Sigma_hat);
  if (!chol.ok())
    throw SingularOrIndefinite("bonus_matrix: lifted Sigma-hat is not positive definite");
  Mat b = chol.inverse() * alpha;
  b.symmetrize();
  return b;
}

}  // namespace lcb
