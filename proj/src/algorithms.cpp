#include "lcb/algorithms.hpp"

#include <cmath>

#include "lcb/parallel.hpp"

namespace lcb {

LogdetFtrl::LogdetFtrl(Schedules schedules, std::uint64_t seed, Options opt)
    : schedules_(schedules),
      opt_(opt),
      z_(schedules.d + 1, schedules.d + 1),
      store_(opt.reservoir, Rng::splitmix64(seed ^ 0xC0FFEEULL)),
      rng_(seed) {
  if (schedules_.d < 1 || schedules_.T < 1)
    throw std::invalid_argument("LogdetFtrl: d and T must be >= 1");
}

ActionDistribution LogdetFtrl::resolve(const ActionSet& a) {
  auto it = round_cache_.find(a.id());
  if (it != round_cache_.end()) return it->second;
  const FtrlObjective obj(z_, schedules_.eta(round_));
  const Vec* warm = nullptr;
  auto wit = warm_.find(a.id());
  if (wit != warm_.end() && wit->second.size() == a.size()) warm = &wit->second;
  ActionDistribution p =
      solve_ftrl_step(a, obj, opt_.solver_tol, opt_.solver_max_iter, nullptr, warm).first;
  if (warm_.size() > 4096) warm_.clear();
  warm_[a.id()] = p.weights;
  round_cache_.emplace(a.id(), p);
  return p;
}

std::pair<ActionDistribution, std::size_t> LogdetFtrl::select(const ActionSet& a) {
  if (pending_) throw std::logic_error("LogdetFtrl::select: round already in progress");
  if (a.dim() != static_cast<std::size_t>(schedules_.d))
    throw std::invalid_argument("LogdetFtrl::select: action dimension differs from d");
  round_cache_.clear();
  // Estimator statistics are taken before the new context arrives, under the
  // round-t objective applied to the stored contexts.
  EstimatorState stats = (round_ == 1)
                             ? EstimatorState::round_one(schedules_.d)
                             : policy_stats([this](const ActionSet& s) { return resolve(s); },
                                            store_, round_, schedules_);
  ActionDistribution p = resolve(a);
  const std::size_t idx = rng_.categorical(p.weights);
  pending_ = Pending{std::move(stats), a, p, idx};
  return {pending_->dist, idx};
}

void LogdetFtrl::update(double ell) {
  if (!pending_) throw std::logic_error("LogdetFtrl::update: no round in progress");
  if (std::abs(ell) > 1.0 + 1e-9)
    throw std::invalid_argument("LogdetFtrl::update: |ell| exceeds 1");
  const Pending& pend = *pending_;
  const LossVector y_hat =
      loss_estimate(pend.stats, pend.context[pend.action_index], ell);
  const LiftedLoss gamma_hat = lifted_loss_estimate(y_hat);
  const Mat bonus = bonus_matrix(schedules_.alpha(round_), pend.stats);
  z_ += gamma_hat.matrix;
  z_ -= bonus;
  z_.symmetrize();
  store_.add(pend.context);
  ++round_;
  pending_.reset();
  round_cache_.clear();
}

void LogdetFtrl::cancel() {
  pending_.reset();
  round_cache_.clear();
}

const EstimatorState& LogdetFtrl::pending_stats() const {
  if (!pending_) throw std::logic_error("LogdetFtrl::pending_stats: no round in progress");
  return pending_->stats;
}

std::size_t LinearPolicy::act(const ActionSet& a) const {
  std::size_t best = 0;
  double best_v = dot(a[0].coords, theta);
  for (std::size_t k = 1; k < a.size(); ++k) {
    const double v = dot(a[k].coords, theta);
    if (v < best_v) {
      best_v = v;
      best = k;
    }
  }
  return best;
}

std::vector<LinearPolicy> build_linear_policy_net(int d, long T, double grid_step,
                                                  std::size_t cap) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("policy net: grid_step must be positive");
  if (d < 1 || T < 1) throw std::invalid_argument("policy net: d and T must be >= 1");
  const long per_axis = static_cast<long>(std::floor(2.0 * static_cast<double>(T) / grid_step)) + 1;
  double size = 1.0;
  for (int i = 0; i < d; ++i) size *= static_cast<double>(per_axis);
  if (size > static_cast<double>(cap))
    throw std::invalid_argument("policy net: size " + std::to_string(size) +
                                " exceeds the cap of " + std::to_string(cap) +
                                " (" + std::to_string(per_axis) + " per axis, d = " +
                                std::to_string(d) + ")");
  const std::size_t total = static_cast<std::size_t>(size + 0.5);
  std::vector<LinearPolicy> net;
  net.reserve(total);
  std::vector<long> idx(d, 0);
  for (;;) {
    Vec theta(d);
    for (int i = 0; i < d; ++i)
      theta[i] = -static_cast<double>(T) + grid_step * static_cast<double>(idx[i]);
    net.push_back(LinearPolicy{std::move(theta)});
    int pos = 0;
    while (pos < d) {
      if (++idx[pos] < per_axis) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == d) break;
  }
  return net;
}

Exp4::Exp4(std::vector<LinearPolicy> policies, int d, long T, std::uint64_t seed, double gamma,
           double eta, Options opt)
    : policies_(std::move(policies)), d_(d), opt_(opt), rng_(seed) {
  if (policies_.empty()) throw std::invalid_argument("Exp4: empty policy set");
  if (d_ < 1 || T < 1) throw std::invalid_argument("Exp4: d and T must be >= 1");
  const double logT = std::log(std::max<double>(static_cast<double>(T), 2.0));
  gamma_ = gamma > 0.0 ? gamma
                       : std::min(1.0, 2.0 * static_cast<double>(d) * std::sqrt(logT / static_cast<double>(T)));
  eta_ = eta > 0.0 ? eta : std::sqrt(logT / static_cast<double>(T));
  log_weights_.assign(policies_.size(), 0.0);
}

Vec Exp4::policy_probs() const {
  double mx = log_weights_[0];
  for (double w : log_weights_) mx = std::max(mx, w);
  Vec p(log_weights_.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(log_weights_[i] - mx);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::pair<ActionDistribution, std::size_t> Exp4::select(const ActionSet& a) {
  if (pending_) throw std::logic_error("Exp4::select: round already in progress");
  if (a.dim() != static_cast<std::size_t>(d_))
    throw std::invalid_argument("Exp4::select: action dimension differs from d");
  const Vec probs = policy_probs();
  std::vector<std::size_t> choice(policies_.size());
  parallel_for(policies_.size(), opt_.parallel,
               [&](std::size_t i) { choice[i] = policies_[i].act(a); });
  Vec p(a.size(), 0.0);
  for (std::size_t i = 0; i < policies_.size(); ++i) p[choice[i]] += probs[i];
  const ActionDistribution nu = g_optimal_design(a, opt_.design_tol).first;
  Vec mix(a.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    mix[k] = (1.0 - gamma_) * p[k] + gamma_ * nu.weights[k];
  // Exact mixture second moment, a finite sum over the set.
  Mat h(d_, d_);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (mix[k] == 0.0) continue;
    const Vec& c = a[k].coords;
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) h(i, j) += mix[k] * c[i] * c[j];
  }
  h.symmetrize();
  const std::size_t idx = rng_.categorical(mix);
  ActionDistribution mixture{Vec(mix)};
  pending_ = Pending{a, mixture, std::move(choice), std::move(h), idx};
  return {mixture, idx};
}

void Exp4::update(double ell) {
  if (!pending_) throw std::logic_error("Exp4::update: no round in progress");
  if (std::abs(ell) > 1.0 + 1e-9) throw std::invalid_argument("Exp4::update: |ell| exceeds 1");
  const Pending& pend = *pending_;
  // w = H-tilde^+ a_t ell; policy losses are <pi(A), w>.
  const Mat hp = pinv_psd(pend.mixture_second_moment, 1e-10);
  Vec w = hp * pend.context[pend.action_index].coords;
  for (double& v : w) v *= ell;
  std::vector<double> est(policies_.size());
  parallel_for(policies_.size(), opt_.parallel, [&](std::size_t i) {
    est[i] = dot(pend.context[pend.policy_choice[i]].coords, w);
  });
  double mx_est = 0.0;
  for (std::size_t i = 0; i < policies_.size(); ++i) {
    log_weights_[i] -= eta_ * est[i];
    mx_est = std::max(mx_est, std::abs(est[i]));
  }
  last_max_loss_estimate_ = mx_est;
  // Renormalize in log space.
  double mx = log_weights_[0];
  for (double v : log_weights_) mx = std::max(mx, v);
  for (double& v : log_weights_) v -= mx;
  pending_.reset();
}

void Exp4::cancel() { pending_.reset(); }

std::pair<ActionDistribution, std::size_t> UniformRandom::select(const ActionSet& a) {
  if (pending_) throw std::logic_error("UniformRandom::select: round already in progress");
  pending_ = true;
  Vec w(a.size(), 1.0 / static_cast<double>(a.size()));
  const std::size_t idx = rng_.uniform_index(a.size());
  return {ActionDistribution(std::move(w)), idx};
}

void UniformRandom::update(double ell) {
  if (!pending_) throw std::logic_error("UniformRandom::update: no round in progress");
  if (std::abs(ell) > 1.0 + 1e-9)
    throw std::invalid_argument("UniformRandom::update: |ell| exceeds 1");
  pending_ = false;
}

DoublingWrapper::DoublingWrapper(BanditFactory factory, std::uint64_t seed)
    : factory_(std::move(factory)), seed_(seed) {}

void DoublingWrapper::ensure_instance() {
  if (!current_) {
    current_ = factory_(epoch_length_, Rng::splitmix64(seed_ ^ static_cast<std::uint64_t>(epoch_)));
    ++instances_created_;
  }
}

std::pair<ActionDistribution, std::size_t> DoublingWrapper::select(const ActionSet& a) {
  ensure_instance();
  return current_->select(a);
}

void DoublingWrapper::update(double ell) {
  ensure_instance();
  current_->update(ell);
  if (++rounds_in_epoch_ >= epoch_length_) {
    ++epoch_;
    epoch_length_ *= 2;
    rounds_in_epoch_ = 0;
    current_.reset();
  }
}

void DoublingWrapper::cancel() {
  if (current_) current_->cancel();
}

}  // namespace lcb
