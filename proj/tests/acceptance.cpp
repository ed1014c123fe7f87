// Acceptance suite: one pass/fail line per criterion, each with its
// tolerances pinned in code. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "lcb/harness.hpp"
#include "lcb/verify.hpp"

using namespace lcb;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int number, const std::string& name, bool pass, double seconds,
            const std::string& detail) {
  std::printf("[%s] %02d %-28s (%6.1fs) %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              seconds, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename Fn>
void criterion(int number, const std::string& name, double time_limit_s, const Fn& fn) {
  const auto start = Clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (secs > time_limit_s) {
    pass = false;
    detail += " [over time limit " + std::to_string(time_limit_s) + "s]";
  }
  report(number, name, pass, secs, detail);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

double mean_regret_at(const std::vector<SeedResult>& results, long t) {
  double sum = 0.0;
  for (const SeedResult& r : results) sum += r.report.curve[t - 1];
  return sum / static_cast<double>(results.size());
}

ExperimentConfig sleeping_cfg(AlgorithmKind alg, long T) {
  // d = 4 sleeping instance with a piecewise adversary switching at 2500.
  // The two loss vectors keep the per-subset ranking of the arms, so the
  // hindsight comparator stays segment-optimal and a non-learning policy
  // keeps a constant regret rate. Reg(T') is measured by a run configured
  // for horizon T' (the schedules are horizon-tuned). The schedule-scale
  // overrides below keep eta_t * alpha_t = 1/(64 t) exact while making the
  // published constants informative at this horizon; the library defaults
  // stay at scale 1.
  ExperimentConfig cfg;
  cfg.algorithm = alg;
  cfg.d = 4;
  cfg.T = T;
  cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  cfg.context.kind = ContextKind::sleeping;
  cfg.context.d = 4;
  cfg.context.q = 0.6;
  cfg.adversary.kind = AdversaryKind::piecewise;
  cfg.adversary.d = 4;
  cfg.adversary.vectors = {Vec{0.670820, 0.223607, -0.223607, -0.670820},
                           Vec{0.656308, 0.072923, -0.364616, -0.656308}};
  cfg.adversary.switch_rounds = {2500};
  cfg.feedback.kind = FeedbackKind::two_point;
  cfg.overrides.beta_scale = 0.01;
  cfg.overrides.eta_scale = 256.0;      // 64 d
  cfg.overrides.alpha_scale = 1.0 / 256.0;
  return cfg;
}

// Three fixed 4-action sets in the d = 3 ball with mixed-sign first
// coordinates: the sign-mode deviation is not representable by any single
// loss vector on this pool, so the misspecification is genuine.
ContextSpec misspec_pool() {
  ContextSpec ctx;
  ctx.kind = ContextKind::finite_support;
  ctx.d = 3;
  auto set = [](std::vector<Vec> coords) {
    std::vector<Action> acts;
    for (Vec& c : coords) acts.emplace_back(std::move(c));
    return ActionSet(std::move(acts));
  };
  ctx.support = {
      {0.5, set({{-0.527904, -0.793668, -0.207884},
                 {-0.556144, 0.07336, -0.446635},
                 {0.600896, -0.613129, -0.3803},
                 {0.253951, 0.463789, 0.709297}})},
      {0.3, set({{0.343403, 0.011908, -0.64442},
                 {0.730968, 0.095278, -0.399509},
                 {0.696088, 0.016745, -0.172108},
                 {0.197825, -0.137914, -0.677359}})},
      {0.2, set({{0.069244, -0.05752, -0.314313},
                 {-0.594659, 0.26533, -0.44739},
                 {-0.288338, 0.493885, -0.358662},
                 {0.230864, -0.525166, -0.337866}})}};
  return ctx;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");

  criterion(1, "exact identities", 10.0, [](std::string& detail) {
    const IdentityStats st = check_exact_identities(1000, 20240601);
    const double worst =
        std::max(st.max_err_trace, std::max(st.max_err_bregman, st.max_err_inner));
    detail = fmt("max|err| trace=%.2e bregman=%.2e inner=%.2e (<=1e-8)", st.max_err_trace,
                 st.max_err_bregman, st.max_err_inner);
    return worst <= 1e-8;
  });

  criterion(2, "special trace lower bound", 10.0, [](std::string& detail) {
    const double slack = check_special_trace_bound(1000, 20240602);
    detail = fmt("min slack %.3e (>= -1e-9)", slack);
    return slack >= -1e-9;
  });

  criterion(3, "ftrl-step solver", 30.0, [](std::string& detail) {
    const FtrlGridStats st = check_ftrl_against_grid(20, 20240603);
    detail = fmt("grid excess %.2e (<=1e-4), symmetric Linf %.2e (<=1e-3)",
                 st.max_objective_excess, st.symmetric_linf);
    return st.max_objective_excess <= 1e-4 && st.symmetric_linf <= 1e-3;
  });

  criterion(4, "g-optimal design", 30.0, [](std::string& detail) {
    const DesignStats st = check_design(2, 8, 20, 20, 5, 1e-2, 20240604);
    detail = fmt("basis Linf %.2e (<=1e-3), |lev-d| %.2e (<=1e-3), random excess %.2e (<=0)",
                 st.basis_uniform_linf, st.basis_leverage_err, st.random_excess);
    return st.basis_uniform_linf <= 1e-3 && st.basis_leverage_err <= 1e-3 &&
           st.random_excess <= 0.0;
  });

  criterion(5, "concentration suite", 60.0, [](std::string& detail) {
    const double rate = check_concentration(2.0, 3, 500, 0.05, 400, 20240605, true);
    detail = fmt("violation rate %.4f (<=0.10)", rate);
    return rate <= 0.10;
  });

  criterion(6, "loss-estimator conditional mean", 60.0, [](std::string& detail) {
    const double sig = check_conditional_mean(5, 100000, 20240606, true);
    detail = fmt("max |mc-closed| = %.2f standard errors (<=3)", sig);
    return sig <= 3.0;
  });

  criterion(7, "end-to-end sublinearity", 600.0, [](std::string& detail) {
    const long T = 5000;
    const auto ftrl_T = run_experiment(sleeping_cfg(AlgorithmKind::logdet_ftrl, T));
    const auto ftrl_T4 = run_experiment(sleeping_cfg(AlgorithmKind::logdet_ftrl, T / 4));
    const auto unif = run_experiment(sleeping_cfg(AlgorithmKind::uniform_random, T));
    const double rate_T = mean_regret_at(ftrl_T, T) / T;
    const double rate_T4 = mean_regret_at(ftrl_T4, T / 4) / (T / 4);
    const double ftrl_reg = mean_regret_at(ftrl_T, T);
    const double unif_reg = mean_regret_at(unif, T);
    detail = fmt("rate(T)/rate(T/4)=%.3f (<=0.6), ftrl/uniform=%.3f (<=0.7)", rate_T / rate_T4,
                 ftrl_reg / unif_reg) +
             " [schedule scales: beta 0.01, eta 256, alpha 1/256]";
    return rate_T <= 0.6 * rate_T4 && ftrl_reg <= 0.7 * unif_reg;
  });

  criterion(8, "exp4 at desk scale", 300.0, [](std::string& detail) {
    auto make = [](AlgorithmKind alg, long T, double step) {
      ExperimentConfig cfg;
      cfg.algorithm = alg;
      cfg.d = 2;
      cfg.T = T;
      cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
      cfg.context.kind = ContextKind::ball;
      cfg.context.d = 2;
      cfg.context.K = 6;
      cfg.adversary.kind = AdversaryKind::fixed;
      cfg.adversary.d = 2;
      cfg.adversary.vectors = {Vec{0.6, -0.6}};
      cfg.feedback.kind = FeedbackKind::two_point;
      cfg.overrides.grid_step = step;  // 21 per axis: 441 policies <= 500
      return cfg;
    };
    const long T = 3000;
    const auto exp4_T = run_experiment(make(AlgorithmKind::exp4, T, 300.0));
    const auto exp4_T4 = run_experiment(make(AlgorithmKind::exp4, T / 4, 75.0));
    const auto unif = run_experiment(make(AlgorithmKind::uniform_random, T, 300.0));
    const double rate_T = mean_regret_at(exp4_T, T) / T;
    const double rate_T4 = mean_regret_at(exp4_T4, T / 4) / (T / 4);
    const double e_reg = mean_regret_at(exp4_T, T);
    const double u_reg = mean_regret_at(unif, T);
    detail = fmt("rate(T)/rate(T/4)=%.3f (<=0.6), exp4/uniform=%.3f (<=0.7)", rate_T / rate_T4,
                 e_reg / u_reg);
    return rate_T <= 0.6 * rate_T4 && e_reg <= 0.7 * u_reg;
  });

  criterion(9, "misspecification consistency", 600.0, [](std::string& detail) {
    // (a) The epsilon = 0 variant replays the base algorithm bit-identically.
    ExperimentConfig base;
    base.algorithm = AlgorithmKind::logdet_ftrl;
    base.d = 3;
    base.T = 300;
    base.seeds = {1, 2, 3};
    base.context.kind = ContextKind::sleeping;
    base.context.d = 3;
    base.context.q = 0.7;
    base.adversary.kind = AdversaryKind::fixed;
    base.adversary.d = 3;
    base.adversary.vectors = {Vec{0.808122, -0.505076, 0.303046}};
    ExperimentConfig variant = base;
    variant.algorithm = AlgorithmKind::misspec_ftrl;
    variant.overrides.epsilon = 0.0;
    const auto runs_base = run_experiment(base);
    const auto runs_var = run_experiment(variant);
    bool identical = true;
    for (std::size_t i = 0; i < runs_base.size(); ++i)
      identical = identical &&
                  trace_to_csv(runs_base[i].trace) == trace_to_csv(runs_var[i].trace);

    // (b) Known-epsilon schedules on a genuinely sign-misspecified
    // environment (non-orthogonal finite-support action pool).
    ExperimentConfig mis = base;
    mis.T = 3000;
    mis.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    mis.context = misspec_pool();
    mis.adversary.epsilon = 0.1;
    mis.adversary.misspec = MisspecMode::sign;
    mis.feedback.kind = FeedbackKind::two_point;
    ExperimentConfig mis_variant = mis;
    mis_variant.algorithm = AlgorithmKind::misspec_ftrl;
    mis_variant.overrides.epsilon = 0.1;
    const auto on_base = run_experiment(mis);
    const auto on_var = run_experiment(mis_variant);
    const double reg_base = mean_regret_at(on_base, mis.T);
    const double reg_var = mean_regret_at(on_var, mis.T);
    detail = std::string("replay ") + (identical ? "identical" : "DIFFERS") +
             fmt(", variant regret %.2f vs base %.2f (<=)", reg_var, reg_base);
    return identical && reg_var <= reg_base;
  });

  criterion(10, "stabilise dispatch statistics", 120.0, [](std::string& detail) {
    const DispatchStats st = check_stabilise_dispatch(10000, 20240610);
    detail = fmt("max deviation %.2f binomial SEs (<=3), skips clean %.0f", st.max_sigma_distance,
                 st.skip_rounds_clean ? 1.0 : 0.0);
    return st.max_sigma_distance <= 3.0 && st.skip_rounds_clean;
  });

  criterion(11, "corral structure", 120.0, [](std::string& detail) {
    const CorralStats st = check_corral_master(2000, 10, 0.8, 20240611);
    detail = fmt("kkt %.1e, telescoping %.1e (<=1e-6), good-arm wins %.0f/10 (>=8)",
                 st.kkt_residual, st.telescoping_err, static_cast<double>(st.good_arm_wins));
    return st.clamp_ok && st.telescoping_err <= 1e-6 && st.good_arm_wins >= 8;
  });

  criterion(12, "comparator oracle", 60.0, [](std::string& detail) {
    const ComparatorStats st = check_comparator(50, 10, 20240612);
    detail = fmt("bruteforce diff %.1e (exact), grid margin %.3e (>=-1e-9)",
                 st.max_bruteforce_diff, st.worst_grid_margin);
    return st.max_bruteforce_diff == 0.0 && st.worst_grid_margin >= -1e-9;
  });

  std::printf("%d/12 criteria passed\n", 12 - g_failures);
  return g_failures;
}
