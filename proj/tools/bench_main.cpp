// Benchmark comparing the serial reference path against the OpenMP path for
// the data-parallel kernels: the EXP4 per-policy update, the Monte-Carlo
// verification batches, and multi-seed experiment execution.

#include <chrono>
#include <cstdio>

#include "lcb/parallel.hpp"
#include "lcb/verify.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
double time_it(const Fn& fn) {
  const auto start = Clock::now();
  fn();
  return seconds_since(start);
}

void print_row(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %8.3fs   openmp %8.3fs   speedup %.2fx\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0);
}

double bench_exp4(bool parallel) {
  auto net = lcb::build_linear_policy_net(2, 3000, 12.0);  // 501 per axis -> 251001 policies
  lcb::Exp4::Options opt;
  opt.parallel = parallel;
  lcb::Exp4 alg(std::move(net), 2, 3000, 42, 0.0, 0.0, opt);
  lcb::Rng env(7);
  lcb::ContextSpec ctx;
  ctx.kind = lcb::ContextKind::ball;
  ctx.d = 2;
  ctx.K = 8;
  const lcb::Vec y = {0.5, -0.5};
  double sink = 0.0;
  for (long t = 1; t <= 40; ++t) {
    const lcb::ActionSet a = lcb::draw_context(ctx, env);
    const auto [mix, idx] = alg.select(a);
    const double mean = lcb::dot(a[idx].coords, y);
    alg.update(env.bernoulli(0.5 * (1.0 + mean)) ? 1.0 : -1.0);
    sink += mix.weights[0];
  }
  return sink;
}

}  // namespace

int main() {
  std::printf("openmp: %s (%d threads)\n", lcb::openmp_enabled() ? "enabled" : "disabled",
              lcb::hardware_threads());

  {
    double sink_serial = 0.0, sink_parallel = 0.0;
    const double ts = time_it([&] { sink_serial = bench_exp4(false); });
    const double tp = time_it([&] { sink_parallel = bench_exp4(true); });
    print_row("exp4 policy kernel", ts, tp);
    if (sink_serial != sink_parallel) {
      std::printf("MISMATCH: serial and parallel runs diverged\n");
      return 1;
    }
  }
  {
    double r1 = 0.0, r2 = 0.0;
    lcb::check_concentration(2.0, 3, 500, 0.05, 50, 99, true);  // warmup
    const double ts = time_it([&] { r1 = lcb::check_concentration(2.0, 3, 500, 0.05, 400, 99, false); });
    const double tp = time_it([&] { r2 = lcb::check_concentration(2.0, 3, 500, 0.05, 400, 99, true); });
    print_row("concentration monte carlo", ts, tp);
    if (r1 != r2) {
      std::printf("MISMATCH: serial and parallel runs diverged\n");
      return 1;
    }
  }
  {
    lcb::ExperimentConfig cfg;
    cfg.algorithm = lcb::AlgorithmKind::logdet_ftrl;
    cfg.d = 3;
    cfg.T = 400;
    cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8};
    cfg.context.kind = lcb::ContextKind::sleeping;
    cfg.context.d = 3;
    cfg.context.q = 0.6;
    cfg.adversary.kind = lcb::AdversaryKind::fixed;
    cfg.adversary.d = 3;
    cfg.adversary.vectors = {lcb::Vec{0.7, -0.1, -0.6}};
    std::vector<lcb::SeedResult> a, b;
    const double ts = time_it([&] { a = lcb::run_experiment(cfg, false); });
    const double tp = time_it([&] { b = lcb::run_experiment(cfg, true); });
    print_row("multi-seed experiment", ts, tp);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (lcb::trace_to_csv(a[i].trace) != lcb::trace_to_csv(b[i].trace)) {
        std::printf("MISMATCH: serial and parallel runs diverged\n");
        return 1;
      }
    }
  }
  std::printf("all kernels: serial and openmp outputs identical\n");
  return 0;
}
