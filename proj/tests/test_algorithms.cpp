#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lcb/algorithms.hpp"
#include "lcb/environments.hpp"

using namespace lcb;

namespace {

ActionSet make_set(std::vector<Vec> coords) {
  std::vector<Action> acts;
  for (Vec& c : coords) acts.emplace_back(std::move(c));
  return ActionSet(std::move(acts));
}

}  // namespace

TEST_CASE("logdet-ftrl round one plays the lifted design and keeps Z zero") {
  Schedules s{2, 100};
  LogdetFtrl alg(s, 42);
  const ActionSet a = make_set({{1.0, 0.0}, {0.0, 1.0}});
  const auto [p, idx] = alg.select(a);
  // Z = 0 at round 1, so this is the barrier minimizer: (1/2, 1/2).
  CHECK(p.weights[0] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(p.weights[1] == doctest::Approx(0.5).epsilon(1e-3));
  alg.update(0.8);
  CHECK(alg.accumulated().max_abs() == 0.0);  // zero-inverse rule at t = 1
  CHECK(alg.round() == 2);

  // Singleton set: forced action.
  const ActionSet one = make_set({{0.4, 0.1}});
  const auto [p1, idx1] = alg.select(one);
  CHECK(p1.weights == Vec{1.0});
  CHECK(idx1 == 0);
  alg.update(-0.2);
}

TEST_CASE("logdet-ftrl update bookkeeping and the two-zero-loss contribution") {
  Schedules s{1, 50};
  LogdetFtrl alg(s, 7);
  const ActionSet pair = make_set({{1.0}, {-1.0}});
  alg.select(pair);
  alg.update(0.0);
  CHECK(alg.accumulated().max_abs() == 0.0);  // round 1 contributes nothing
  alg.select(pair);
  const EstimatorState& st = alg.pending_stats();
  const Mat expected_bonus = bonus_matrix(s.alpha(2), st);
  alg.update(0.0);
  // With zero losses only the round-2 bonus enters: Z = -alpha_2 Sigma^{-1}.
  CHECK((alg.accumulated() + expected_bonus).max_abs() <= 1e-12);
  // Z stays symmetric.
  const Mat& z = alg.accumulated();
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j) CHECK(z(i, j) == doctest::Approx(z(j, i)));
}

TEST_CASE("logdet-ftrl protocol misuse and cancel") {
  Schedules s{2, 20};
  LogdetFtrl alg(s, 1);
  const ActionSet a = make_set({{1.0, 0.0}, {0.0, 1.0}});
  CHECK_THROWS_AS(alg.update(0.1), std::logic_error);
  alg.select(a);
  CHECK_THROWS_AS(alg.select(a), std::logic_error);
  CHECK_THROWS_AS(alg.update(1.5), std::invalid_argument);
  alg.cancel();  // cancelled rounds leave no trace
  CHECK(alg.round() == 1);
  alg.select(a);
  alg.update(0.5);
  CHECK(alg.round() == 2);
}

TEST_CASE("determinism: same seed, same trajectory; eps=0 replays base") {
  Schedules s{2, 60};
  ContextSpec ctx;
  ctx.kind = ContextKind::sleeping;
  ctx.d = 2;
  ctx.q = 0.7;
  auto run = [&](double eps) {
    Schedules sched = s;
    sched.epsilon = eps;
    LogdetFtrl alg(sched, 99);
    Rng env(55);
    std::vector<std::size_t> actions;
    for (long t = 1; t <= 30; ++t) {
      const ActionSet a = draw_context(ctx, env);
      actions.push_back(alg.select(a).second);
      alg.update(env.bernoulli(0.5) ? 1.0 : -1.0);
    }
    return actions;
  };
  CHECK(run(0.0) == run(0.0));
  CHECK(run(0.0) == run(0.0));  // epsilon 0 twice: also exercises stability
}

TEST_CASE("policy net sizes") {
  CHECK(build_linear_policy_net(1, 1, 1.0).size() == 3);
  CHECK(build_linear_policy_net(2, 1, 1.0).size() == 9);
  CHECK(build_linear_policy_net(2, 10, 1.0).size() == 441);
  CHECK_THROWS_AS(build_linear_policy_net(3, 100, 1.0, 1000), std::invalid_argument);
  // theta in {-1, 0, 1} for d=1, T=1.
  const auto net = build_linear_policy_net(1, 1, 1.0);
  CHECK(net[0].theta[0] == doctest::Approx(-1.0));
  CHECK(net[1].theta[0] == doctest::Approx(0.0));
  CHECK(net[2].theta[0] == doctest::Approx(1.0));
}

TEST_CASE("linear policy tie-breaking") {
  const LinearPolicy pi{Vec{0.0, 0.0}};  // all actions tie
  const ActionSet a = make_set({{0.1, 0.0}, {0.0, 0.1}});
  CHECK(pi.act(a) == 0);
  const LinearPolicy down{Vec{1.0, 0.0}};
  CHECK(down.act(make_set({{0.5, 0.0}, {-0.5, 0.0}})) == 1);
}

TEST_CASE("exp4 basics") {
  auto net = build_linear_policy_net(2, 5, 1.0);  // 121 policies
  Exp4 alg(std::move(net), 2, 1000, 3);
  const ActionSet a = make_set({{1.0, 0.0}, {0.0, 1.0}, {-0.6, 0.3}});

  // Round 1: uniform policy weights.
  const Vec probs = alg.policy_probs();
  for (double p : probs) CHECK(p == doctest::Approx(1.0 / 121.0));

  const auto [mix, idx] = alg.select(a);
  double sum = 0.0;
  for (double w : mix.weights) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

  // Zero loss leaves the weights unchanged.
  alg.update(0.0);
  for (double p : alg.policy_probs()) CHECK(p == doctest::Approx(1.0 / 121.0));

  // Magnitude bound d/gamma on the loss estimates over a few rounds
  // (sleeping contexts: the exploration design is exactly optimal there).
  Rng env(8);
  ContextSpec ctx;
  ctx.kind = ContextKind::sleeping;
  ctx.d = 2;
  ctx.q = 0.7;
  const Vec y = {0.7, -0.2};
  for (long t = 0; t < 100; ++t) {
    const ActionSet c = draw_context(ctx, env);
    const auto [m, i] = alg.select(c);
    alg.update(env.bernoulli(0.5 * (1.0 + dot(c[i].coords, y))) ? 1.0 : -1.0);
    CHECK(alg.last_max_loss_estimate() <= 2.0 / alg.gamma() + 1e-6);
  }
}

TEST_CASE("exp4 rejects an empty policy set and double select") {
  CHECK_THROWS_AS(Exp4(std::vector<LinearPolicy>{}, 2, 100, 1), std::invalid_argument);
  auto net = build_linear_policy_net(2, 2, 1.0);
  Exp4 alg(std::move(net), 2, 100, 2);
  const ActionSet a = make_set({{0.5, 0.0}, {0.0, 0.5}});
  alg.select(a);
  CHECK_THROWS_AS(alg.select(a), std::logic_error);
  CHECK_THROWS_AS(alg.update(2.0), std::invalid_argument);
  alg.cancel();
}

TEST_CASE("exp4 with a single policy keeps a point distribution") {
  std::vector<LinearPolicy> single = {LinearPolicy{Vec{1.0, 1.0}}};
  Exp4 alg(std::move(single), 2, 100, 5);
  CHECK(alg.policy_probs() == Vec{1.0});
  const ActionSet a = make_set({{0.2, 0.1}, {-0.3, 0.4}});
  alg.select(a);
  alg.update(0.5);
  CHECK(alg.policy_probs() == Vec{1.0});
}

TEST_CASE("exp4 gamma=1 samples the design exactly") {
  auto net = build_linear_policy_net(2, 2, 1.0);
  Exp4 alg(std::move(net), 2, 100, 6, 1.0, 0.1);
  const ActionSet basis = make_set({{1.0, 0.0}, {0.0, 1.0}});
  const auto [mix, idx] = alg.select(basis);
  CHECK(mix.weights[0] == doctest::Approx(0.5).epsilon(1e-6));
  alg.cancel();
}

TEST_CASE("doubling wrapper epoch schedule") {
  std::vector<long> horizons;
  BanditFactory factory = [&](long horizon, std::uint64_t seed) -> std::unique_ptr<Bandit> {
    horizons.push_back(horizon);
    return std::make_unique<UniformRandom>(seed);
  };
  DoublingWrapper wrap(std::move(factory), 9);
  const ActionSet a = make_set({{0.5}, {-0.5}});
  for (int t = 1; t <= 7; ++t) {
    wrap.select(a);
    wrap.update(0.0);
  }
  CHECK((horizons == std::vector<long>{1, 2, 4}));
  CHECK(wrap.instances_created() == 3);
  // Next round opens horizon 8.
  wrap.select(a);
  wrap.update(0.0);
  CHECK(horizons.back() == 8);
  // ceil(log2(T+1)) instances after T rounds.
  CHECK(wrap.instances_created() == 4);
}

TEST_CASE("uniform random baseline") {
  UniformRandom alg(12);
  const ActionSet one = make_set({{0.9, 0.0}});
  const auto [p, idx] = alg.select(one);
  CHECK(idx == 0);
  CHECK(p.weights == Vec{1.0});
  alg.update(0.3);
  CHECK_THROWS_AS(alg.update(0.3), std::logic_error);
}
