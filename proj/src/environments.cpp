#include "lcb/environments.hpp"

#include <cmath>

namespace lcb {

void ContextSpec::validate() const {
  if (d < 1) throw std::invalid_argument("context.d: must be >= 1");
  switch (kind) {
    case ContextKind::finite_support: {
      if (support.empty()) throw std::invalid_argument("context.support: must be nonempty");
      double sum = 0.0;
      for (const auto& [p, set] : support) {
        if (p < 0.0) throw std::invalid_argument("context.support: negative probability");
        if (set.dim() != static_cast<std::size_t>(d))
          throw std::invalid_argument("context.support: action dimension differs from d");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("context.support: probabilities do not sum to 1");
      break;
    }
    case ContextKind::sleeping:
      if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("context.q: must be in (0, 1]");
      break;
    case ContextKind::ball:
      if (K < 1) throw std::invalid_argument("context.K: must be >= 1");
      break;
  }
}

void AdversarySpec::validate() const {
  if (d < 1) throw std::invalid_argument("adversary.d: must be >= 1");
  if (epsilon < 0.0) throw std::invalid_argument("adversary.epsilon: must be >= 0");
  switch (kind) {
    case AdversaryKind::fixed:
      if (vectors.size() != 1) throw std::invalid_argument("adversary.vectors: fixed needs 1 vector");
      break;
    case AdversaryKind::piecewise:
      if (vectors.empty()) throw std::invalid_argument("adversary.vectors: piecewise needs >= 1 vector");
      if (switch_rounds.size() + 1 != vectors.size())
        throw std::invalid_argument("adversary.switch_rounds: needs one entry per segment boundary");
      for (std::size_t i = 1; i < switch_rounds.size(); ++i)
        if (switch_rounds[i] <= switch_rounds[i - 1])
          throw std::invalid_argument("adversary.switch_rounds: must be strictly increasing");
      break;
    case AdversaryKind::drift:
      if (d < 2) throw std::invalid_argument("adversary.drift: needs d >= 2");
      break;
  }
  for (const Vec& v : vectors)
    if (v.size() != static_cast<std::size_t>(this->d))
      throw std::invalid_argument("adversary.vectors: dimension differs from d");
}

namespace {

Vec clamp_to_ball(Vec y) {
  const double n = norm2(y);
  if (n > 1.0) {
    for (double& v : y) v /= n;
  }
  return y;
}

ActionSet draw_sleeping(int d, double q, Rng& rng) {
  // Rejection-resample the empty set; the reported distribution is therefore
  // the product measure conditioned on nonemptiness.
  for (;;) {
    std::vector<Action> acts;
    for (int i = 0; i < d; ++i) {
      if (rng.bernoulli(q)) {
        Vec e(d, 0.0);
        e[i] = 1.0;
        acts.emplace_back(std::move(e));
      }
    }
    if (!acts.empty()) return ActionSet(std::move(acts));
  }
}

ActionSet draw_ball(int d, int k, Rng& rng) {
  std::vector<Action> acts;
  acts.reserve(k);
  for (int j = 0; j < k; ++j) {
    Vec v(d);
    double n2 = 0.0;
    for (int i = 0; i < d; ++i) {
      v[i] = rng.normal();
      n2 += v[i] * v[i];
    }
    const double n = std::sqrt(std::max(n2, 1e-300));
    const double radius = std::pow(rng.uniform01(), 1.0 / static_cast<double>(d));
    for (double& x : v) x *= radius / n;
    acts.emplace_back(std::move(v));
  }
  return ActionSet(std::move(acts));
}

}  // namespace

ActionSet draw_context(const ContextSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case ContextKind::finite_support: {
      Vec probs;
      probs.reserve(spec.support.size());
      for (const auto& [p, set] : spec.support) probs.push_back(p);
      return spec.support[rng.categorical(probs)].second;
    }
    case ContextKind::sleeping:
      return draw_sleeping(spec.d, spec.q, rng);
    case ContextKind::ball:
      return draw_ball(spec.d, spec.K, rng);
  }
  throw std::logic_error("draw_context: unknown kind");
}

Vec adversary_loss(const AdversarySpec& spec, long t) {
  if (t < 1) throw std::invalid_argument("adversary_loss: t must be >= 1");
  switch (spec.kind) {
    case AdversaryKind::fixed:
      return clamp_to_ball(spec.vectors[0]);
    case AdversaryKind::piecewise: {
      std::size_t seg = 0;
      while (seg < spec.switch_rounds.size() && t > spec.switch_rounds[seg]) ++seg;
      return clamp_to_ball(spec.vectors[seg]);
    }
    case AdversaryKind::drift: {
      Vec y(spec.d, 0.0);
      y[0] = std::cos(spec.omega * static_cast<double>(t));
      y[1] = std::sin(spec.omega * static_cast<double>(t));
      return y;
    }
  }
  throw std::logic_error("adversary_loss: unknown kind");
}

double misspec_value(const AdversarySpec& spec, const Action& a, long t) {
  const Vec y = adversary_loss(spec, t);
  double f = dot(a.coords, y);
  switch (spec.misspec) {
    case MisspecMode::none:
      break;
    case MisspecMode::radial: {
      // 2 eps (||a||^2 - 1/2) ranges over [-eps, eps] on the unit ball.
      const double r2 = dot(a.coords, a.coords);
      f += 2.0 * spec.epsilon * (r2 - 0.5);
      break;
    }
    case MisspecMode::sign: {
      const double a1 = a.coords[0];
      f += spec.epsilon * (a1 > 0.0 ? 1.0 : (a1 < 0.0 ? -1.0 : 0.0));
      break;
    }
  }
  return std::clamp(f, -1.0, 1.0);
}

double sample_feedback(const FeedbackModel& model, double mean, Rng& rng) {
  if (std::abs(mean) > 1.0 + 1e-12)
    throw std::invalid_argument("sample_feedback: |mean| exceeds 1");
  switch (model.kind) {
    case FeedbackKind::two_point:
      return rng.bernoulli(0.5 * (1.0 + mean)) ? 1.0 : -1.0;
    case FeedbackKind::exact:
      return mean;
  }
  throw std::logic_error("sample_feedback: unknown kind");
}

}  // namespace lcb
