#include "lcb/meta.hpp"

#include <cmath>

namespace lcb {

double stabilise_theta(int j, double epsilon, long T) {
  if (j < 0) throw std::invalid_argument("stabilise_theta: j must be >= 0");
  const double tw = std::pow(2.0, -j);
  const double tt = static_cast<double>(T);
  const double lt = std::log(tt);
  return tw * epsilon * tt + 4.0 * std::sqrt(tw * tt * lt) + 8.0 * lt;
}

RouteDecision stabilise_route(double w, long T) {
  if (w < 0.0 || w > 1.0) throw std::invalid_argument("stabilise_route: w must be in [0, 1]");
  RouteDecision dec;
  if (w <= 1.0 / static_cast<double>(T)) {
    dec.skip = true;
    return dec;
  }
  int j = 0;
  while (w <= std::pow(2.0, -j - 1)) ++j;
  dec.bucket = j;
  return dec;
}

double stabilise_forward_prob(int j, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("stabilise_forward_prob: w must be positive");
  return std::min(1.0, std::pow(2.0, -j - 1) / w);
}

Stabilise::Stabilise(double epsilon, long T, ThetaBanditFactory factory, std::uint64_t seed)
    : epsilon_(epsilon), T_(T), factory_(std::move(factory)), seed_(seed), rng_(seed) {
  if (epsilon_ < 0.0) throw std::invalid_argument("Stabilise: epsilon must be >= 0");
  if (T_ < 1) throw std::invalid_argument("Stabilise: T must be >= 1");
}

Bandit* Stabilise::instance(int j) {
  auto it = instances_.find(j);
  if (it == instances_.end()) {
    const double theta = stabilise_theta(j, epsilon_, T_);
    it = instances_
             .emplace(j, factory_(theta, Rng::splitmix64(seed_ ^ (0xABCDULL + 31ULL * j))))
             .first;
  }
  return it->second.get();
}

std::pair<ActionDistribution, std::size_t> Stabilise::select(const ActionSet& a, double w) {
  if (pending_) throw std::logic_error("Stabilise::select: round already in progress");
  const RouteDecision dec = stabilise_route(w, T_);
  if (dec.skip) {
    ++skipped_;
    pending_ = Pending{true, 0, w};
    // Arbitrary policy on skip rounds: the first action of the set.
    Vec p(a.size(), 0.0);
    p[0] = 1.0;
    return {ActionDistribution(std::move(p)), 0};
  }
  ++assigned_[dec.bucket];
  pending_ = Pending{false, dec.bucket, w};
  return instance(dec.bucket)->select(a);
}

void Stabilise::feedback(double ell) {
  if (!pending_) throw std::logic_error("Stabilise::feedback: no round in progress");
  const Pending pend = *pending_;
  pending_.reset();
  if (pend.skip) return;
  Bandit* alg = instance(pend.bucket);
  if (rng_.bernoulli(stabilise_forward_prob(pend.bucket, pend.w))) {
    ++fed_[pend.bucket];
    alg->update(ell);
  } else {
    alg->cancel();
  }
}

void Stabilise::no_feedback() {
  if (!pending_) throw std::logic_error("Stabilise::no_feedback: no round in progress");
  const Pending pend = *pending_;
  pending_.reset();
  if (pend.skip) return;
  instance(pend.bucket)->cancel();
}

void Stabilise::run_protocol_round(const ActionSet& a, double w,
                                   const std::function<double()>& loss) {
  select(a, w);
  // Reception coin first, then the forward coin inside feedback().
  if (rng_.bernoulli(w)) {
    feedback(loss());
  } else {
    no_feedback();
  }
}

long Stabilise::assigned_rounds(int j) const {
  auto it = assigned_.find(j);
  return it == assigned_.end() ? 0 : it->second;
}

long Stabilise::fed_rounds(int j) const {
  auto it = fed_.find(j);
  return it == fed_.end() ? 0 : it->second;
}

CorralMaster::CorralMaster(int arms, long T, double c1_prime, double eta)
    : m_(arms), T_(T), c1_prime_(c1_prime) {
  if (m_ < 1) throw std::invalid_argument("CorralMaster: need at least one arm");
  if (static_cast<double>(m_) > static_cast<double>(T_))
    throw std::invalid_argument("CorralMaster: clamp infeasible, M/T > 1");
  if (!(c1_prime_ >= 1.0))
    throw std::invalid_argument("CorralMaster: c1' must be >= 1");
  eta_ = eta > 0.0 ? eta : 1.0 / (4.0 * c1_prime_ * std::sqrt(static_cast<double>(T_)));
  cumulative_.assign(m_, 0.0);
  rho_.assign(m_, static_cast<double>(m_));
  bonus_total_.assign(m_, 0.0);
}

Vec CorralMaster::weights() const {
  // w_i(lambda) = max(1/T, 1/(eta (L_i + lambda))), strictly decreasing in
  // lambda where unclamped; bisect the multiplier until the sum is 1.
  const double wmin = 1.0 / static_cast<double>(T_);
  double lmin = -cumulative_[0];
  for (double l : cumulative_) lmin = std::max(lmin, -l);
  auto weight_sum = [&](double lambda) {
    double s = 0.0;
    for (double l : cumulative_) {
      const double denom = eta_ * (l + lambda);
      const double w = denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
      s += std::min(1.0, std::max(wmin, w));
    }
    return s;
  };
  double lo = lmin + 1e-18;
  double hi = lmin + static_cast<double>(m_) / eta_ + 1.0;  // sum(hi) < 1 guaranteed
  while (weight_sum(hi) > 1.0) hi = lmin + 2.0 * (hi - lmin);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (weight_sum(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) break;
  }
  const double lambda = 0.5 * (lo + hi);
  Vec w(m_);
  double sum = 0.0;
  for (int i = 0; i < m_; ++i) {
    const double denom = eta_ * (cumulative_[i] + lambda);
    w[i] = std::min(1.0, std::max(wmin, denom > 0.0 ? 1.0 / denom : 1.0));
    sum += w[i];
  }
  // Distribute the residual over unclamped coordinates to restore an exact sum.
  double slack = 1.0 - sum;
  if (slack != 0.0) {
    double unclamped = 0.0;
    for (int i = 0; i < m_; ++i)
      if (w[i] > wmin) unclamped += w[i];
    if (unclamped > 0.0) {
      for (int i = 0; i < m_; ++i)
        if (w[i] > wmin) w[i] = std::max(wmin, w[i] + slack * (w[i] / unclamped));
    }
  }
  return w;
}

void CorralMaster::update(int chosen, double z, const Vec& w) {
  if (chosen < 0 || chosen >= m_) throw std::invalid_argument("CorralMaster::update: bad arm");
  if (w.size() != static_cast<std::size_t>(m_))
    throw std::invalid_argument("CorralMaster::update: weight size mismatch");
  const double wmin = 1.0 / static_cast<double>(T_);
  if (w[chosen] < wmin - 1e-12)
    throw std::invalid_argument("CorralMaster::update: chosen weight violates the clamp");
  const double tt = static_cast<double>(T_);
  for (int i = 0; i < m_; ++i) {
    const double z_hat = (i == chosen) ? z / w[i] : 0.0;
    const double rho_new = std::max(rho_[i], 1.0 / w[i]);
    const double r = c1_prime_ * (std::sqrt(rho_new * tt) - std::sqrt(rho_[i] * tt));
    rho_[i] = rho_new;
    bonus_total_[i] += r;
    cumulative_[i] += z_hat - r;
  }
}

namespace {

// Known-misspecification base for one STABILISE bucket: a doubling wrapper
// over fixed-horizon FTRL instances; the budget theta maps to a per-epoch
// misspecification level theta / horizon.
ThetaBanditFactory make_theta_factory(int d, const LogdetFtrl::Options& base_opt) {
  return [d, base_opt](double theta, std::uint64_t seed) -> std::unique_ptr<Bandit> {
    BanditFactory per_epoch = [d, base_opt, theta](long horizon,
                                                   std::uint64_t epoch_seed) -> std::unique_ptr<Bandit> {
      Schedules s;
      s.d = d;
      s.T = horizon;
      s.epsilon = theta / static_cast<double>(horizon);
      return std::make_unique<LogdetFtrl>(s, epoch_seed, base_opt);
    };
    return std::make_unique<DoublingWrapper>(std::move(per_epoch), seed);
  };
}

}  // namespace

CorralBandit::CorralBandit(int d, long T, std::uint64_t seed, Options opt)
    : d_(d),
      T_(T),
      master_(std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(std::max(T, 2L)))))),
              T,
              opt.c1_prime > 0.0
                  ? opt.c1_prime
                  : (static_cast<double>(d) * d * std::log(static_cast<double>(T)) +
                     std::sqrt(static_cast<double>(d))) *
                        std::sqrt(std::log(static_cast<double>(T)))),
      rng_(seed) {
  const int m = master_.arms();
  arms_.reserve(m);
  for (int i = 1; i <= m; ++i) {
    const double eps_hypothesis = std::pow(2.0, i) / static_cast<double>(T_);
    arms_.push_back(std::make_unique<Stabilise>(
        eps_hypothesis, T_, make_theta_factory(d_, opt.base),
        Rng::splitmix64(seed ^ (0x5EEDULL + 131ULL * i))));
  }
}

std::pair<ActionDistribution, std::size_t> CorralBandit::select(const ActionSet& a) {
  if (pending_) throw std::logic_error("CorralBandit::select: round already in progress");
  const Vec w = master_.weights();
  std::vector<std::pair<ActionDistribution, std::size_t>> cand;
  cand.reserve(arms_.size());
  for (std::size_t i = 0; i < arms_.size(); ++i) cand.push_back(arms_[i]->select(a, w[i]));
  const int chosen = static_cast<int>(rng_.categorical(w));
  pending_ = Pending{w, chosen};
  // Report the played mixture sum_i w_i p_i for the trace.
  Vec mix(a.size(), 0.0);
  for (std::size_t i = 0; i < arms_.size(); ++i)
    for (std::size_t k = 0; k < a.size(); ++k) mix[k] += w[i] * cand[i].first.weights[k];
  double sum = 0.0;
  for (double v : mix) sum += v;
  for (double& v : mix) v /= sum;
  return {ActionDistribution(std::move(mix)), cand[chosen].second};
}

void CorralBandit::update(double ell) {
  if (!pending_) throw std::logic_error("CorralBandit::update: no round in progress");
  const Pending pend = *pending_;
  pending_.reset();
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    if (static_cast<int>(i) == pend.chosen)
      arms_[i]->feedback(ell);
    else
      arms_[i]->no_feedback();
  }
  master_.update(pend.chosen, ell, pend.w);
}

void CorralBandit::cancel() {
  if (!pending_) return;
  for (auto& arm : arms_) arm->no_feedback();
  pending_.reset();
}

}  // namespace lcb
