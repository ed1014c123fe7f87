#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lcb/harness.hpp"
#include "lcb/parallel.hpp"
#include "lcb/verify.hpp"

using namespace lcb;

// The OpenMP kernels write one independent slot per index, so they must be
// bit-identical to the serial reference regardless of thread count.

TEST_CASE("parallel_for matches the serial loop") {
  std::vector<double> serial(1000), par(1000);
  parallel_for(serial.size(), false, [&](std::size_t i) {
    serial[i] = std::sin(static_cast<double>(i)) * 1e-3 + static_cast<double>(i * i);
  });
  parallel_for(par.size(), true, [&](std::size_t i) {
    par[i] = std::sin(static_cast<double>(i)) * 1e-3 + static_cast<double>(i * i);
  });
  CHECK(serial == par);
}

TEST_CASE("exp4 policy kernel: serial reference equals openmp path") {
  auto run = [](bool parallel) {
    auto net = build_linear_policy_net(2, 200, 2.0);  // 201^2 / ... moderate net
    Exp4::Options opt;
    opt.parallel = parallel;
    Exp4 alg(std::move(net), 2, 500, 21, 0.0, 0.0, opt);
    Rng env(33);
    ContextSpec ctx;
    ctx.kind = ContextKind::ball;
    ctx.d = 2;
    ctx.K = 5;
    const Vec y = {0.4, -0.6};
    std::vector<std::size_t> actions;
    for (long t = 1; t <= 60; ++t) {
      const ActionSet a = draw_context(ctx, env);
      const auto [mix, idx] = alg.select(a);
      actions.push_back(idx);
      alg.update(env.bernoulli(0.5 * (1.0 + dot(a[idx].coords, y))) ? 1.0 : -1.0);
    }
    return std::make_pair(actions, alg.policy_probs());
  };
  const auto [a_serial, p_serial] = run(false);
  const auto [a_par, p_par] = run(true);
  CHECK(a_serial == a_par);
  CHECK(p_serial == p_par);
}

TEST_CASE("multi-seed runs: serial reference equals openmp path") {
  ExperimentConfig cfg;
  cfg.algorithm = AlgorithmKind::logdet_ftrl;
  cfg.d = 2;
  cfg.T = 40;
  cfg.seeds = {5, 6, 7, 8};
  cfg.context.kind = ContextKind::sleeping;
  cfg.context.d = 2;
  cfg.context.q = 0.6;
  cfg.adversary.kind = AdversaryKind::fixed;
  cfg.adversary.d = 2;
  cfg.adversary.vectors = {Vec{0.5, -0.5}};
  const auto serial = run_experiment(cfg, false);
  const auto par = run_experiment(cfg, true);
  REQUIRE(serial.size() == par.size());
  for (std::size_t i = 0; i < serial.size(); ++i)
    CHECK(trace_to_csv(serial[i].trace) == trace_to_csv(par[i].trace));
}

TEST_CASE("monte-carlo suites: serial reference equals openmp path") {
  const double serial = check_concentration(2.0, 3, 200, 0.05, 60, 77, false);
  const double par = check_concentration(2.0, 3, 200, 0.05, 60, 77, true);
  CHECK(serial == par);
  const double cm_serial = check_conditional_mean(1, 20000, 501, false);
  const double cm_par = check_conditional_mean(1, 20000, 501, true);
  CHECK(cm_serial == cm_par);
}
