#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "lcb/environments.hpp"

using namespace lcb;

TEST_CASE("finite support draws the listed sets") {
  std::vector<Action> acts;
  acts.emplace_back(Vec{0.3, 0.1});
  const ActionSet only(std::move(acts));
  ContextSpec spec;
  spec.kind = ContextKind::finite_support;
  spec.d = 2;
  spec.support = {{1.0, only}};
  spec.validate();
  Rng rng(5);
  for (int i = 0; i < 20; ++i) CHECK(draw_context(spec, rng).id() == only.id());
}

TEST_CASE("finite support frequencies match probabilities") {
  std::vector<Action> a1, a2;
  a1.emplace_back(Vec{0.5, 0.0});
  a2.emplace_back(Vec{0.0, 0.5});
  ContextSpec spec;
  spec.kind = ContextKind::finite_support;
  spec.d = 2;
  spec.support = {{0.25, ActionSet(std::move(a1))}, {0.75, ActionSet(std::move(a2))}};
  Rng rng(17);
  const long n = 100000;
  long hits = 0;
  const std::uint64_t id0 = spec.support[0].second.id();
  for (long i = 0; i < n; ++i)
    if (draw_context(spec, rng).id() == id0) ++hits;
  const double se = std::sqrt(0.25 * 0.75 / n);
  CHECK(std::abs(static_cast<double>(hits) / n - 0.25) <= 3.0 * se);
}

TEST_CASE("sleeping contexts: full availability and conditioning") {
  ContextSpec spec;
  spec.kind = ContextKind::sleeping;
  spec.d = 3;
  spec.q = 1.0;
  Rng rng(7);
  const ActionSet s = draw_context(spec, rng);
  CHECK(s.size() == 3);

  spec.d = 2;
  spec.q = 0.5;
  std::map<std::size_t, long> by_size;
  long singles_e1 = 0;
  const long n = 60000;
  for (long i = 0; i < n; ++i) {
    const ActionSet c = draw_context(spec, rng);
    CHECK(c.size() >= 1);
    ++by_size[c.size()];
    if (c.size() == 1 && c[0].coords[0] == 1.0) ++singles_e1;
  }
  // Conditioned on nonemptiness: {e1}, {e2}, {e1,e2} each with probability 1/3.
  const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / n);
  CHECK(std::abs(static_cast<double>(by_size[2]) / n - 1.0 / 3) <= 3 * se);
  CHECK(std::abs(static_cast<double>(singles_e1) / n - 1.0 / 3) <= 3 * se);
}

TEST_CASE("ball contexts stay in the ball") {
  ContextSpec spec;
  spec.kind = ContextKind::ball;
  spec.d = 4;
  spec.K = 6;
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const ActionSet s = draw_context(spec, rng);
    CHECK(s.size() == 6);
    for (const Action& a : s.actions()) CHECK(norm2(a.coords) <= 1.0 + 1e-12);
  }
}

TEST_CASE("adversary schedules") {
  AdversarySpec fixed;
  fixed.kind = AdversaryKind::fixed;
  fixed.d = 2;
  fixed.vectors = {Vec{1.0, 0.0}};
  CHECK((adversary_loss(fixed, 1) == Vec{1.0, 0.0}));
  CHECK((adversary_loss(fixed, 999) == Vec{1.0, 0.0}));

  AdversarySpec pw;
  pw.kind = AdversaryKind::piecewise;
  pw.d = 1;
  pw.vectors = {Vec{1.0}, Vec{-1.0}};
  pw.switch_rounds = {50};
  pw.validate();
  CHECK(adversary_loss(pw, 50)[0] == doctest::Approx(1.0));
  CHECK(adversary_loss(pw, 51)[0] == doctest::Approx(-1.0));

  AdversarySpec drift;
  drift.kind = AdversaryKind::drift;
  drift.d = 3;
  drift.omega = 0.3;
  drift.validate();
  for (long t = 1; t <= 40; ++t) {
    const Vec y = adversary_loss(drift, t);
    CHECK(norm2(y) == doctest::Approx(1.0));
    CHECK(y[0] == doctest::Approx(std::cos(0.3 * t)));
    CHECK(y[1] == doctest::Approx(std::sin(0.3 * t)));
  }

  // Oversized vectors are renormalized into the ball.
  AdversarySpec big;
  big.kind = AdversaryKind::fixed;
  big.d = 2;
  big.vectors = {Vec{3.0, 4.0}};
  CHECK(norm2(adversary_loss(big, 1)) <= 1.0 + 1e-12);
}

TEST_CASE("misspecification shapes respect the budget") {
  AdversarySpec spec;
  spec.kind = AdversaryKind::fixed;
  spec.d = 2;
  spec.vectors = {Vec{0.6, -0.3}};

  spec.epsilon = 0.0;
  spec.misspec = MisspecMode::none;
  const Action a(Vec{0.5, 0.5});
  CHECK(misspec_value(spec, a, 1) == doctest::Approx(dot(a.coords, spec.vectors[0])));

  spec.epsilon = 0.1;
  spec.misspec = MisspecMode::sign;
  const Action e1(Vec{1.0, 0.0});
  AdversarySpec orth = spec;
  orth.vectors = {Vec{0.0, 0.8}};
  CHECK(misspec_value(orth, e1, 3) == doctest::Approx(0.1));

  Rng rng(23);
  for (const MisspecMode mode : {MisspecMode::radial, MisspecMode::sign}) {
    spec.misspec = mode;
    for (int i = 0; i < 5000; ++i) {
      Vec v(2);
      v[0] = rng.uniform(-0.7, 0.7);
      v[1] = rng.uniform(-0.7, 0.7);
      const Action act(v);
      const double f = misspec_value(spec, act, 1);
      CHECK(std::abs(f) <= 1.0);
      CHECK(std::abs(f - std::clamp(dot(act.coords, spec.vectors[0]), -1.0, 1.0)) <=
            spec.epsilon + 1e-12);
    }
  }
}

TEST_CASE("feedback models") {
  FeedbackModel exact{FeedbackKind::exact};
  Rng rng(3);
  CHECK(sample_feedback(exact, 0.37, rng) == 0.37);

  FeedbackModel two{FeedbackKind::two_point};
  CHECK(sample_feedback(two, 1.0, rng) == 1.0);
  CHECK(sample_feedback(two, -1.0, rng) == -1.0);
  const long n = 100000;
  double sum = 0.0;
  for (long i = 0; i < n; ++i) {
    const double ell = sample_feedback(two, 0.5, rng);
    CHECK((ell == 1.0 || ell == -1.0));
    sum += ell;
  }
  const double var = 1.0 - 0.25;  // E[ell^2] - mean^2
  CHECK(std::abs(sum / n - 0.5) <= 3.0 * std::sqrt(var / n));
}
