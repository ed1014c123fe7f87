#include "lcb/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "lcb/parallel.hpp"

namespace lcb {

namespace {

Vec random_ball_vec(Rng& rng, int d, double radius = 1.0) {
  Vec v(d);
  double n2 = 0.0;
  for (int i = 0; i < d; ++i) {
    v[i] = rng.normal();
    n2 += v[i] * v[i];
  }
  const double n = std::sqrt(std::max(n2, 1e-300));
  const double r = radius * std::pow(rng.uniform01(), 1.0 / d);
  for (double& x : v) x *= r / n;
  return v;
}

Vec random_simplex(Rng& rng, std::size_t n) {
  Vec w(n);
  double sum = 0.0;
  for (double& x : w) {
    x = -std::log(std::max(rng.uniform01(), 1e-300));
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

Mat random_spd(Rng& rng, int k, double ridge_lo = 0.05, double ridge_hi = 1.0) {
  Mat a(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a(i, j) = rng.normal();
  Mat h(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double s = 0.0;
      for (int l = 0; l < k; ++l) s += a(i, l) * a(j, l);
      h(i, j) = s / k;
    }
  const double mu = rng.uniform(ridge_lo, ridge_hi);
  for (int i = 0; i < k; ++i) h(i, i) += mu;
  h.symmetrize();
  return h;
}

// [[B + bb^T, b], [b^T, 1]]
Mat lift_block(const Mat& b, const Vec& v) {
  const std::size_t k = b.rows();
  Mat m(k + 1, k + 1);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = b(i, j) + v[i] * v[j];
  for (std::size_t i = 0; i < k; ++i) {
    m(i, k) = v[i];
    m(k, i) = v[i];
  }
  m(k, k) = 1.0;
  return m;
}

ActionSet random_action_set(Rng& rng, int d, int n_actions) {
  std::vector<Action> acts;
  acts.reserve(n_actions);
  for (int i = 0; i < n_actions; ++i) acts.emplace_back(random_ball_vec(rng, d));
  return ActionSet(std::move(acts));
}

}  // namespace

IdentityStats check_exact_identities(int instances, std::uint64_t seed) {
  Rng root(seed);
  IdentityStats st;
  for (int i = 0; i < instances; ++i) {
    Rng rng = root.derive(i);
    const int k = 1 + i % 5;
    const Mat h = random_spd(rng, k);
    const Mat g = random_spd(rng, k);
    Vec gv(k), hv(k);
    for (int j = 0; j < k; ++j) {
      gv[j] = rng.uniform(-1.0, 1.0);
      hv[j] = rng.uniform(-1.0, 1.0);
    }
    const Mat big_g = lift_block(g, gv);
    const Mat big_h = lift_block(h, hv);

    Cholesky ch(h);
    Vec diff(k);
    for (int j = 0; j < k; ++j) diff[j] = gv[j] - hv[j];
    const double norm_term = dot(diff, ch.solve(diff));
    const double tr_small = ch.solve(g).trace();

    Cholesky ch_big(big_h);
    const double tr_big = ch_big.solve(big_g).trace();
    st.max_err_trace =
        std::max(st.max_err_trace, std::abs(tr_big - (tr_small + norm_term + 1.0)));

    const double breg_big = bregman_div(big_g, big_h);
    const double breg_small = bregman_div(g, h);
    st.max_err_bregman =
        std::max(st.max_err_bregman, std::abs(breg_big - (breg_small + norm_term)));

    // Loss inner-product identity on an unrelated random instance.
    const int d = 1 + i % 5;
    const ActionSet a = random_action_set(rng, d, 2 + static_cast<int>(rng.uniform_index(4)));
    const ActionDistribution p{random_simplex(rng, a.size())};
    Vec y = random_ball_vec(rng, d);
    const LiftedCov cov = lifted_cov(p, a);
    const LiftedLoss loss = lifted_loss(y);
    const double lhs = frob_inner(cov.matrix, loss.matrix);
    const double rhs = dot(mean_action(p, a), y);
    st.max_err_inner = std::max(st.max_err_inner, std::abs(lhs - rhs));
  }
  return st;
}

double check_special_trace_bound(int instances, std::uint64_t seed) {
  Rng root(seed);
  double worst_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    Rng rng = root.derive(0x5000 + i);
    const int d = 2 + i % 4;
    const ActionSet au = random_action_set(rng, d, 2 + static_cast<int>(rng.uniform_index(4)));
    const ActionDistribution pu{random_simplex(rng, au.size())};
    const Mat big_u = lifted_cov(pu, au).matrix;
    const Vec u = mean_action(pu, au);

    const ActionSet ax = random_action_set(rng, d, 2 + static_cast<int>(rng.uniform_index(4)));
    const ActionDistribution px{random_simplex(rng, ax.size())};
    const Vec x_hat = mean_action(px, ax);
    Mat small_h(d, d);
    for (std::size_t k = 0; k < ax.size(); ++k)
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          small_h(r, c) += px.weights[k] * (ax[k].coords[r] - x_hat[r]) * (ax[k].coords[c] - x_hat[c]);
    small_h.symmetrize();
    const Mat big_h = lifted_cov(px, ax).matrix;

    const double beta = std::exp(rng.uniform(std::log(1e-3), std::log(10.0)));
    const Mat sigma = small_h + Mat::identity(d) * beta;
    const Mat big_sigma = big_h + Mat::identity(d + 1) * beta;

    Cholesky cs(sigma);
    Vec diff(d);
    for (int r = 0; r < d; ++r) diff[r] = u[r] - x_hat[r];
    const double local_norm = dot(diff, cs.solve(diff));
    Cholesky cb(big_sigma);
    const double lhs = cb.solve(big_u).trace();
    worst_slack = std::min(worst_slack, lhs - (0.25 * local_norm - 0.25));
  }
  return worst_slack;
}

FtrlGridStats check_ftrl_against_grid(int instances, std::uint64_t seed) {
  Rng root(seed);
  FtrlGridStats st;
  for (int i = 0; i < instances; ++i) {
    Rng rng = root.derive(0x6000 + i);
    // d = 1, three well-separated scalar actions.
    Vec coords;
    for (;;) {
      coords = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      std::sort(coords.begin(), coords.end());
      if (coords[1] - coords[0] > 0.2 && coords[2] - coords[1] > 0.2) break;
    }
    std::vector<Action> acts;
    for (double c : coords) acts.emplace_back(Vec{c});
    const ActionSet a(std::move(acts));
    Mat z(2, 2);
    z(0, 0) = rng.uniform(-2.0, 2.0);
    z(1, 1) = rng.uniform(-2.0, 2.0);
    z(0, 1) = z(1, 0) = rng.uniform(-2.0, 2.0);
    const double eta = std::exp(rng.uniform(std::log(0.5), std::log(5.0)));
    const FtrlObjective obj(z, eta);
    const auto [p, rep] = solve_ftrl_step(a, obj, 1e-7, 500000);

    // Independent oracle: full-space objective on the 1e-3 simplex grid. The
    // reduced barrier equals the full lifted barrier here (rank = d).
    Vec lin(3);
    for (int k = 0; k < 3; ++k) {
      const double c = coords[k];
      lin[k] = c * c * z(0, 0) + 2.0 * c * z(0, 1) + z(1, 1);
    }
    double grid_min = std::numeric_limits<double>::infinity();
    const int n = 1000;
    for (int u = 0; u <= n; ++u) {
      for (int v = 0; v <= n - u; ++v) {
        const double p0 = static_cast<double>(u) / n;
        const double p1 = static_cast<double>(v) / n;
        const double p2 = 1.0 - p0 - p1;
        double m1 = 0.0, m2 = 0.0, l = 0.0;
        m1 = p0 * coords[0] + p1 * coords[1] + p2 * coords[2];
        m2 = p0 * coords[0] * coords[0] + p1 * coords[1] * coords[1] + p2 * coords[2] * coords[2];
        l = p0 * lin[0] + p1 * lin[1] + p2 * lin[2];
        const double det = m2 - m1 * m1;
        if (det <= 1e-15) continue;
        const double f = l - std::log(det) / eta;
        grid_min = std::min(grid_min, f);
      }
    }
    st.max_objective_excess = std::max(st.max_objective_excess, std::abs(rep.objective - grid_min));
  }
  // Symmetric two-action instance.
  std::vector<Action> acts;
  acts.emplace_back(Vec{1.0, 0.0});
  acts.emplace_back(Vec{0.0, 1.0});
  const ActionSet a(std::move(acts));
  const FtrlObjective obj(Mat(3, 3), 1.0);
  const auto [p, rep] = solve_ftrl_step(a, obj, 1e-10, 200000);
  st.symmetric_linf = std::max(std::abs(p.weights[0] - 0.5), std::abs(p.weights[1] - 0.5));
  return st;
}

DesignStats check_design(int d_lo, int d_hi, int random_sets, int actions_per_set, int random_d,
                         double tol, std::uint64_t seed) {
  Rng root(seed);
  DesignStats st;
  for (int d = d_lo; d <= d_hi; ++d) {
    std::vector<Action> acts;
    for (int i = 0; i < d; ++i) {
      Vec e(d, 0.0);
      e[i] = 1.0;
      acts.emplace_back(std::move(e));
    }
    const ActionSet a(std::move(acts));
    const auto [nu, rep] = g_optimal_design(a, 1e-6);
    for (double w : nu.weights)
      st.basis_uniform_linf = std::max(st.basis_uniform_linf, std::abs(w - 1.0 / d));
    st.basis_leverage_err =
        std::max(st.basis_leverage_err, std::abs(max_leverage(nu, a) - static_cast<double>(d)));
  }
  for (int i = 0; i < random_sets; ++i) {
    Rng rng = root.derive(0x7000 + i);
    const ActionSet a = random_action_set(rng, random_d, actions_per_set);
    const auto [nu, rep] = g_optimal_design(a, 1e-3, 200000);
    const double lev = max_leverage(nu, a);
    st.random_excess = std::max(st.random_excess, lev - (static_cast<double>(random_d) + tol));
  }
  return st;
}

double check_concentration(double c, int d, int n, double delta, int trials, std::uint64_t seed,
                           bool parallel) {
  Rng root(seed);
  // Fixed finite-support family of PSD matrices bounded by c I.
  Rng setup = root.derive(0xC0);
  const int support = 6;
  std::vector<Mat> members;
  for (int j = 0; j < support; ++j) {
    Vec u = random_ball_vec(setup, d);
    const double nn = norm2(u);
    for (double& x : u) x /= std::max(nn, 1e-12);
    members.push_back(Mat::outer(u, u) * c);
  }
  const Vec probs = random_simplex(setup, support);
  Mat population(d, d);
  for (int j = 0; j < support; ++j) population += members[j] * probs[j];
  population.symmetrize();
  const double tau = 1.5 * c * (static_cast<double>(d) / n) * std::log(d / delta);

  std::vector<int> violations(trials, 0);
  parallel_for(trials, parallel, [&](std::size_t trial) {
    Rng rng = root.derive(0xC1000 + trial);
    Mat sum(d, d);
    for (int i = 0; i < n; ++i) sum += members[rng.categorical(probs)];
    Mat lhs = sum * (1.0 / n) + Mat::identity(d) * tau - population * 0.5;
    lhs.symmetrize();
    violations[trial] = min_eigenvalue(lhs) < -1e-12 ? 1 : 0;
  });
  long total = 0;
  for (int v : violations) total += v;
  return static_cast<double>(total) / trials;
}

double check_conditional_mean(int instances, int draws, std::uint64_t seed, bool parallel) {
  Rng root(seed);
  double worst = 0.0;
  for (int inst = 0; inst < instances; ++inst) {
    Rng rng = root.derive(0xD000 + inst);
    const int d = 3;
    const int n_ctx = 3;
    std::vector<ActionSet> pool;
    std::vector<ActionDistribution> frozen;
    for (int c = 0; c < n_ctx; ++c) {
      pool.push_back(random_action_set(rng, d, 2 + static_cast<int>(rng.uniform_index(3))));
      frozen.emplace_back(random_simplex(rng, pool.back().size()));
    }
    const Vec ctx_probs = random_simplex(rng, n_ctx);
    const Vec y = random_ball_vec(rng, d);
    auto resolve = [&](const ActionSet& s) -> ActionDistribution {
      for (int c = 0; c < n_ctx; ++c)
        if (pool[c].id() == s.id()) return frozen[c];
      throw std::logic_error("conditional mean: unknown context");
    };

    // Store of 40 sampled past contexts under the frozen policy.
    Schedules sched;
    sched.d = d;
    sched.T = 500;
    ContextStore store;
    const int m = 40;
    for (int i = 0; i < m; ++i) store.add(pool[rng.categorical(ctx_probs)]);
    const EstimatorState state = policy_stats(resolve, store, m + 1, sched);

    // Closed form: Sigma-hat^{-1} E_{A~D} E_{a~p} [(a - x-hat) a^T] y.
    Vec target(d, 0.0);
    for (int c = 0; c < n_ctx; ++c) {
      for (std::size_t k = 0; k < pool[c].size(); ++k) {
        const Vec& a = pool[c][k].coords;
        const double w = ctx_probs[c] * frozen[c].weights[k];
        const double ay = dot(a, y);
        for (int r = 0; r < d; ++r) target[r] += w * (a[r] - state.x_hat[r]) * ay;
      }
    }
    const Vec closed = Cholesky(state.Sigma_hat).solve(target);

    // Monte Carlo over fresh (context, action, two-point loss) draws.
    const int chunks = 100;
    const int per_chunk = draws / chunks;
    std::vector<Vec> sums(chunks, Vec(d, 0.0));
    std::vector<Vec> sq(chunks, Vec(d, 0.0));
    parallel_for(chunks, parallel, [&](std::size_t ch) {
      Rng crng = root.derive(0xE0000 + 1000 * inst + ch);
      for (int i = 0; i < per_chunk; ++i) {
        const int c = static_cast<int>(crng.categorical(ctx_probs));
        const std::size_t k = crng.categorical(frozen[c].weights);
        const Vec& a = pool[c][k].coords;
        const double mean = dot(a, y);
        const double ell = crng.bernoulli(0.5 * (1.0 + mean)) ? 1.0 : -1.0;
        Vec centered(d);
        for (int r = 0; r < d; ++r) centered[r] = a[r] - state.x_hat[r];
        Vec yh = Cholesky(state.Sigma_hat).solve(centered);
        for (int r = 0; r < d; ++r) {
          const double v = yh[r] * ell;
          sums[ch][r] += v;
          sq[ch][r] += v * v;
        }
      }
    });
    const double total_n = static_cast<double>(per_chunk) * chunks;
    for (int r = 0; r < d; ++r) {
      double s = 0.0, s2 = 0.0;
      for (int ch = 0; ch < chunks; ++ch) {
        s += sums[ch][r];
        s2 += sq[ch][r];
      }
      const double mc = s / total_n;
      const double var = std::max(s2 / total_n - mc * mc, 1e-300);
      const double se = std::sqrt(var / total_n);
      worst = std::max(worst, std::abs(mc - closed[r]) / se);
    }
  }
  return worst;
}

namespace {

// Counting stub standing in for a base algorithm in dispatch tests.
class CountingBandit : public Bandit {
 public:
  explicit CountingBandit(long* selects, long* updates, long* cancels)
      : selects_(selects), updates_(updates), cancels_(cancels) {}
  std::pair<ActionDistribution, std::size_t> select(const ActionSet& a) override {
    ++*selects_;
    Vec w(a.size(), 0.0);
    w[0] = 1.0;
    return {ActionDistribution(std::move(w)), 0};
  }
  void update(double) override { ++*updates_; }
  void cancel() override { ++*cancels_; }

 private:
  long* selects_;
  long* updates_;
  long* cancels_;
};

}  // namespace

DispatchStats check_stabilise_dispatch(long rounds_per_bucket, std::uint64_t seed) {
  const long T = 100000;
  long selects = 0, updates = 0, cancels = 0;
  ThetaBanditFactory factory = [&](double, std::uint64_t) {
    return std::make_unique<CountingBandit>(&selects, &updates, &cancels);
  };
  Stabilise stab(0.5, T, std::move(factory), seed);
  std::vector<Action> one;
  one.emplace_back(Vec{1.0});
  const ActionSet ctx(std::move(one));
  const Vec bucket_w = {0.75, 0.375, 0.1875, 0.09375};  // buckets j = 0..3
  const long skip_rounds = 500;
  for (long r = 0; r < rounds_per_bucket; ++r)
    for (double w : bucket_w) stab.run_protocol_round(ctx, w, [] { return 0.5; });
  for (long r = 0; r < skip_rounds; ++r)
    stab.run_protocol_round(ctx, 1e-6, [] { return 0.5; });

  DispatchStats st;
  st.skipped = stab.skipped_rounds();
  long assigned_total = 0;
  for (int j = 0; j < 4; ++j) {
    const long assigned = stab.assigned_rounds(j);
    assigned_total += assigned;
    const long fed = stab.fed_rounds(j);
    const double p = std::pow(2.0, -j - 1);
    const double se = std::sqrt(p * (1.0 - p) / assigned);
    const double rate = static_cast<double>(fed) / assigned;
    st.max_sigma_distance = std::max(st.max_sigma_distance, std::abs(rate - p) / se);
  }
  // Skip rounds must not touch any instance: every select is an assigned
  // round, and every assigned round resolves to exactly one update or cancel.
  st.skip_rounds_clean = (selects == assigned_total) && (updates + cancels == selects) &&
                         (st.skipped == skip_rounds);
  return st;
}

CorralStats check_corral_master(long T, int seeds, double weight_bar, std::uint64_t seed) {
  Rng root(seed);
  CorralStats st;
  st.seeds = seeds;
  const double wmin = 1.0 / static_cast<double>(T);
  for (int s = 0; s < seeds; ++s) {
    Rng rng = root.derive(0xF000 + s);
    CorralMaster master(2, T, 1.0);
    const int good = 0;  // constant loss 0.1; арм 1 pays 0.9
    for (long t = 1; t <= T; ++t) {
      const Vec w = master.weights();
      double sum = 0.0;
      for (int i = 0; i < 2; ++i) {
        if (w[i] < wmin - 1e-12 || w[i] > 1.0 + 1e-12) st.clamp_ok = false;
        sum += w[i];
      }
      if (std::abs(sum - 1.0) > 1e-9) st.clamp_ok = false;
      // KKT: implied multipliers of unclamped coordinates must agree, and
      // clamped coordinates must have a nonnegative reduced gradient.
      double lambda = std::numeric_limits<double>::quiet_NaN();
      double lambda_scale = 1.0;
      for (int i = 0; i < 2; ++i) {
        if (w[i] > wmin * (1.0 + 1e-9)) {
          const double li = 1.0 / (master.eta() * w[i]) - master.cumulative(i);
          if (std::isnan(lambda)) {
            lambda = li;
            lambda_scale = std::max(1.0, std::abs(li));
          } else {
            st.kkt_residual = std::max(st.kkt_residual, std::abs(li - lambda) / lambda_scale);
          }
        }
      }
      if (!std::isnan(lambda)) {
        for (int i = 0; i < 2; ++i) {
          if (w[i] <= wmin * (1.0 + 1e-9)) {
            const double reduced = master.cumulative(i) + lambda - 1.0 / (master.eta() * w[i]);
            if (reduced < -1e-8 * lambda_scale)
              st.kkt_residual = std::max(st.kkt_residual, -reduced / lambda_scale);
          }
        }
      }
      const int it = static_cast<int>(rng.categorical(w));
      const double z = (it == good) ? 0.1 : 0.9;
      master.update(it, z, w);
    }
    for (int i = 0; i < 2; ++i) {
      const double expect = master.c1_prime() * (std::sqrt(master.rho(i) * T) -
                                                 std::sqrt(2.0 * static_cast<double>(T)));
      st.telescoping_err = std::max(st.telescoping_err, std::abs(master.bonus_total(i) - expect));
    }
    if (master.weights()[good] > weight_bar) ++st.good_arm_wins;
  }
  return st;
}

ComparatorStats check_comparator(int tiny_instances, int grid_instances, std::uint64_t seed) {
  Rng root(seed);
  ComparatorStats st;
  st.worst_grid_margin = std::numeric_limits<double>::infinity();
  for (int inst = 0; inst < tiny_instances; ++inst) {
    Rng rng = root.derive(0xA000 + inst);
    const int d = 2;
    const int n_ctx = 1 + static_cast<int>(rng.uniform_index(3));
    std::vector<ActionSet> pool;
    for (int c = 0; c < n_ctx; ++c)
      pool.push_back(random_action_set(rng, d, 1 + static_cast<int>(rng.uniform_index(3))));
    const long rounds = 6 + static_cast<long>(rng.uniform_index(7));
    std::vector<ActionSet> contexts;
    std::vector<Vec> ys;
    for (long t = 0; t < rounds; ++t) {
      contexts.push_back(pool[rng.uniform_index(n_ctx)]);
      ys.push_back(random_ball_vec(rng, d));
    }
    const double comp = comparator_loss(contexts, ys);

    // Brute force: enumerate one action choice per distinct context, with the
    // per-context sums accumulated in the same round order and the groups
    // summed in the same ascending-id order as the comparator.
    std::vector<std::uint64_t> ids;
    std::vector<const ActionSet*> reps;
    for (const ActionSet& c : contexts) {
      bool seen = false;
      for (std::uint64_t id : ids) seen = seen || id == c.id();
      if (!seen) {
        ids.push_back(c.id());
        reps.push_back(&c);
      }
    }
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j)
        if (ids[j] < ids[i]) {
          std::swap(ids[i], ids[j]);
          std::swap(reps[i], reps[j]);
        }
    std::vector<Vec> cum(reps.size());
    for (std::size_t g = 0; g < reps.size(); ++g) cum[g].assign(reps[g]->size(), 0.0);
    for (std::size_t t = 0; t < contexts.size(); ++t) {
      for (std::size_t g = 0; g < reps.size(); ++g) {
        if (ids[g] != contexts[t].id()) continue;
        for (std::size_t k = 0; k < reps[g]->size(); ++k)
          cum[g][k] += dot((*reps[g])[k].coords, ys[t]);
        break;
      }
    }
    std::vector<std::size_t> choice(reps.size(), 0);
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
      double total = 0.0;
      for (std::size_t g = 0; g < reps.size(); ++g) total += cum[g][choice[g]];
      best = std::min(best, total);
      std::size_t pos = 0;
      while (pos < reps.size()) {
        if (++choice[pos] < reps[pos]->size()) break;
        choice[pos] = 0;
        ++pos;
      }
      if (pos == reps.size()) break;
    }
    st.max_bruteforce_diff = std::max(st.max_bruteforce_diff, std::abs(comp - best));
  }

  const auto grid = build_linear_policy_net(2, 10, 1.0);  // 441 policies
  for (int inst = 0; inst < grid_instances; ++inst) {
    Rng rng = root.derive(0xB000 + inst);
    const int d = 2;
    std::vector<ActionSet> pool;
    for (int c = 0; c < 3; ++c)
      pool.push_back(random_action_set(rng, d, 2 + static_cast<int>(rng.uniform_index(3))));
    std::vector<ActionSet> contexts;
    std::vector<Vec> ys;
    for (long t = 0; t < 40; ++t) {
      contexts.push_back(pool[rng.uniform_index(3)]);
      ys.push_back(random_ball_vec(rng, d));
    }
    const double comp = comparator_loss(contexts, ys);
    double grid_best = std::numeric_limits<double>::infinity();
    for (const LinearPolicy& pi : grid) {
      double total = 0.0;
      for (std::size_t t = 0; t < contexts.size(); ++t)
        total += dot(contexts[t][pi.act(contexts[t])].coords, ys[t]);
      grid_best = std::min(grid_best, total);
    }
    st.worst_grid_margin = std::min(st.worst_grid_margin, grid_best - comp);
  }
  return st;
}

namespace {

VerifyRow row(const std::string& name, bool pass, double stat, double threshold,
              const std::string& detail = "") {
  return VerifyRow{name, pass, stat, threshold, detail};
}

}  // namespace

std::vector<VerifyRow> verify_suites(std::uint64_t seed, bool parallel) {
  std::vector<VerifyRow> rows;

  {
    const IdentityStats st = check_exact_identities(1000, seed);
    rows.push_back(row("core.lifted_trace_identity", st.max_err_trace <= 1e-8, st.max_err_trace,
                       1e-8, "1000 instances"));
    rows.push_back(row("core.bregman_identity", st.max_err_bregman <= 1e-8, st.max_err_bregman,
                       1e-8, "1000 instances"));
    rows.push_back(row("core.loss_inner_product", st.max_err_inner <= 1e-10, st.max_err_inner,
                       1e-10, "1000 instances"));
  }
  {
    Rng rng(seed);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 200; ++i) {
      Rng r = rng.derive(0x2000 + i);
      const int d = 1 + i % 5;
      const ActionSet a = random_action_set(r, d, 2 + static_cast<int>(r.uniform_index(4)));
      const ActionDistribution p{random_simplex(r, a.size())};
      std::string why;
      if (!lifted_cov_valid(lifted_cov(p, a), &why)) ok = false;
    }
    rows.push_back(row("core.lifted_cov_invariants", ok, worst, 0.0, "200 random simplex draws"));
  }
  {
    const double slack = check_special_trace_bound(1000, seed);
    rows.push_back(row("core.special_trace_bound", slack >= -1e-9, slack, -1e-9,
                       "min slack over 1000 instances"));
  }
  {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      Rng r = rng.derive(0x3000 + i);
      const int d = 2 + i % 4;
      const ActionSet a = random_action_set(r, d, 2 + static_cast<int>(r.uniform_index(5)));
      const AffineReduction red = affine_reduce(a);
      for (const Action& act : a.actions()) {
        const Vec rec = red.reconstruct(red.reduce(act));
        Vec diff(rec.size());
        for (std::size_t j = 0; j < rec.size(); ++j) diff[j] = rec[j] - act.coords[j];
        worst = std::max(worst, norm2(diff));
      }
    }
    rows.push_back(row("design.affine_roundtrip", worst <= 1e-9, worst, 1e-9, "100 random sets"));
  }
  {
    Rng rng(seed);
    double worst_increase = 0.0;
    for (int i = 0; i < 50; ++i) {
      Rng r = rng.derive(0x3500 + i);
      const int d = 2 + i % 3;
      const ActionSet a = random_action_set(r, d, 3 + static_cast<int>(r.uniform_index(4)));
      Mat z(d + 1, d + 1);
      for (int x = 0; x <= d; ++x)
        for (int y = x; y <= d; ++y) z(x, y) = z(y, x) = r.uniform(-1.0, 1.0);
      std::vector<double> trace;
      solve_ftrl_step(a, FtrlObjective(z, 1.0), 1e-8, 0, &trace);
      for (std::size_t k = 1; k < trace.size(); ++k)
        worst_increase = std::max(worst_increase, trace[k] - trace[k - 1]);
    }
    rows.push_back(row("design.fw_monotone", worst_increase <= 1e-9, worst_increase, 1e-9,
                       "objective nonincreasing, 50 instances"));
  }
  {
    const FtrlGridStats st = check_ftrl_against_grid(20, seed);
    rows.push_back(row("design.ftrl_grid_certificate", st.max_objective_excess <= 1e-4,
                       st.max_objective_excess, 1e-4, "20 instances, 1e-3 grid"));
    rows.push_back(row("design.ftrl_symmetric", st.symmetric_linf <= 1e-3, st.symmetric_linf,
                       1e-3, "{e1,e2}, Z=0"));
  }
  {
    const DesignStats st = check_design(2, 8, 20, 20, 5, 1e-2, seed);
    rows.push_back(row("design.basis_uniform", st.basis_uniform_linf <= 1e-3,
                       st.basis_uniform_linf, 1e-3, "standard bases d=2..8"));
    rows.push_back(row("design.basis_leverage", st.basis_leverage_err <= 1e-3,
                       st.basis_leverage_err, 1e-3));
    rows.push_back(row("design.random_leverage", st.random_excess <= 0.0, st.random_excess, 0.0,
                       "20 random sets in B^5"));
  }
  {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      Rng r = rng.derive(0x4000 + i);
      const int d = 2 + i % 3;
      const ActionSet a = random_action_set(r, d, 2 + static_cast<int>(r.uniform_index(4)));
      const ActionDistribution p{random_simplex(r, a.size())};
      std::vector<ActionSet> store_sets;
      ContextStore store;
      for (int k = 0; k < 5; ++k) store.add(a);
      Schedules s;
      s.d = d;
      s.T = 100;
      const EstimatorState st = policy_stats([&](const ActionSet&) { return p; }, store, 6, s);
      const Mat expect = lift_block(st.H_hat, st.x_hat);
      worst = std::max(worst, (st.lifted_H_hat - expect).max_abs());
    }
    rows.push_back(row("estimators.block_consistency", worst <= 1e-8, worst, 1e-8,
                       "lifted H-hat block formula"));
  }
  {
    const double rate = check_concentration(2.0, 3, 500, 0.05, 400, seed, parallel);
    rows.push_back(row("estimators.concentration", rate <= 0.10, rate, 0.10,
                       "400 trials, threshold 2*delta"));
  }
  {
    const double sig = check_conditional_mean(5, 100000, seed, parallel);
    rows.push_back(
        row("estimators.conditional_mean", sig <= 3.0, sig, 3.0, "max |mc-closed| in SEs"));
  }
  {
    // EXP4 mixture floor and loss-estimate magnitude across a short run.
    // Sleeping contexts keep the exploration design exactly optimal (uniform
    // over orthonormal arms), so the d/gamma bound is tested at its face value.
    Rng rng(seed);
    Rng env = rng.derive(0x8800);
    const int d = 2;
    const long T = 2000;
    auto net = build_linear_policy_net(d, 50, 5.0);  // 21 per axis
    Exp4::Options opt;
    opt.design_tol = 1e-8;
    Exp4 alg(std::move(net), d, T, seed ^ 0x11, 0.0, 0.0, opt);
    ContextSpec ctx;
    ctx.kind = ContextKind::sleeping;
    ctx.d = d;
    ctx.q = 0.7;
    bool floor_ok = true;
    double worst_mag = 0.0;
    const Vec y = {0.6, -0.4};
    for (long t = 1; t <= 400; ++t) {
      const ActionSet a = draw_context(ctx, env);
      const auto [nu, nurep] = g_optimal_design(a, 1e-8);
      const auto [mix, idx] = alg.select(a);
      double sum = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (mix.weights[k] < alg.gamma() * nu.weights[k] - 1e-12) floor_ok = false;
        sum += mix.weights[k];
      }
      if (std::abs(sum - 1.0) > 1e-9) floor_ok = false;
      const double mean = dot(a[idx].coords, y);
      alg.update(env.bernoulli(0.5 * (1.0 + mean)) ? 1.0 : -1.0);
      worst_mag = std::max(worst_mag, alg.last_max_loss_estimate());
    }
    const double bound = static_cast<double>(d) / alg.gamma() + 1e-6;
    rows.push_back(row("algorithms.exp4_mixture_floor", floor_ok, floor_ok ? 0.0 : 1.0, 0.0,
                       "p >= gamma*nu, sums to 1"));
    rows.push_back(row("algorithms.exp4_magnitude", worst_mag <= bound, worst_mag, bound,
                       "max |loss estimate| <= d/gamma"));
  }
  {
    const DispatchStats st = check_stabilise_dispatch(10000, seed ^ 0x99);
    rows.push_back(row("meta.stabilise_dispatch", st.max_sigma_distance <= 3.0 && st.skip_rounds_clean,
                       st.max_sigma_distance, 3.0,
                       "feedback rate vs 2^{-j-1}, " + std::to_string(st.skipped) + " skips"));
  }
  {
    const CorralStats st = check_corral_master(2000, 10, 0.8, seed ^ 0xAA);
    rows.push_back(row("meta.corral_clamp_kkt", st.clamp_ok && st.kkt_residual <= 1e-8,
                       st.kkt_residual, 1e-8, "clamped simplex + stationarity"));
    rows.push_back(row("meta.corral_telescoping", st.telescoping_err <= 1e-6, st.telescoping_err,
                       1e-6, "sum r = c1'(sqrt(rho T)-sqrt(MT))"));
    rows.push_back(row("meta.corral_adaptivity",
                       st.good_arm_wins >= 8, static_cast<double>(st.good_arm_wins), 8,
                       "good-arm weight > 0.8 on seeds"));
  }
  {
    const ComparatorStats st = check_comparator(50, 10, seed ^ 0xBB);
    rows.push_back(row("harness.comparator_bruteforce", st.max_bruteforce_diff == 0.0,
                       st.max_bruteforce_diff, 0.0, "50 tiny instances, exact"));
    rows.push_back(row("harness.comparator_grid_dominance", st.worst_grid_margin >= -1e-9,
                       st.worst_grid_margin, -1e-9, "min margin vs 441 linear policies"));
  }
  {
    // Environment statistics.
    Rng rng(seed);
    Rng r = rng.derive(0x9900);
    ContextSpec sleeping;
    sleeping.kind = ContextKind::sleeping;
    sleeping.d = 2;
    sleeping.q = 0.5;
    long counts[3] = {0, 0, 0};  // {e1}, {e2}, {e1,e2}
    const long n = 30000;
    for (long i = 0; i < n; ++i) {
      const ActionSet s = draw_context(sleeping, r);
      if (s.size() == 2)
        ++counts[2];
      else
        ++(s[0].coords[0] == 1.0 ? counts[0] : counts[1]);
    }
    double worst_sig = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double p = 1.0 / 3.0;
      const double se = std::sqrt(p * (1 - p) / n);
      worst_sig = std::max(worst_sig, std::abs(static_cast<double>(counts[k]) / n - p) / se);
    }
    AdversarySpec adv;
    adv.kind = AdversaryKind::fixed;
    adv.d = 3;
    adv.vectors = {Vec{0.4, -0.3, 0.2}};
    adv.epsilon = 0.2;
    adv.misspec = MisspecMode::radial;
    double worst_dev = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const Action a{random_ball_vec(r, 3)};
      const double f = misspec_value(adv, a, 1 + i % 50);
      const double lin = dot(a.coords, adversary_loss(adv, 1 + i % 50));
      if (std::abs(f) > 1.0 + 1e-12) worst_dev = std::max(worst_dev, 10.0);
      worst_dev = std::max(worst_dev, std::abs(f - std::clamp(lin, -1.0, 1.0)) - adv.epsilon);
    }
    rows.push_back(row("environments.sleeping_conditioned", worst_sig <= 3.0, worst_sig, 3.0,
                       "conditioned subset frequencies"));
    rows.push_back(row("environments.misspec_budget", worst_dev <= 1e-12, worst_dev, 1e-12,
                       "|f - <a,y>| <= eps, f in [-1,1]"));
  }
  {
    // Determinism: identical (config, seed) gives identical CSV bytes, and
    // the epsilon = 0 misspec variant replays the base algorithm.
    ExperimentConfig cfg;
    cfg.algorithm = AlgorithmKind::logdet_ftrl;
    cfg.d = 2;
    cfg.T = 40;
    cfg.seeds = {7, 8};
    cfg.context.kind = ContextKind::sleeping;
    cfg.context.d = 2;
    cfg.context.q = 0.7;
    cfg.adversary.kind = AdversaryKind::fixed;
    cfg.adversary.d = 2;
    cfg.adversary.vectors = {Vec{0.8, -0.5}};
    const auto run1 = run_experiment(cfg, parallel);
    const auto run2 = run_experiment(cfg, parallel);
    ExperimentConfig cfg_mis = cfg;
    cfg_mis.algorithm = AlgorithmKind::misspec_ftrl;
    cfg_mis.overrides.epsilon = 0.0;
    const auto run3 = run_experiment(cfg_mis, parallel);
    bool same = true;
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
      if (trace_to_csv(run1[i].trace) != trace_to_csv(run2[i].trace)) same = false;
      if (trace_to_csv(run1[i].trace) != trace_to_csv(run3[i].trace)) same = false;
    }
    rows.push_back(row("harness.determinism", same, same ? 0.0 : 1.0, 0.0,
                       "bit-identical replays incl. eps=0 variant"));
  }
  return rows;
}

std::string verify_table(const std::vector<VerifyRow>& rows) {
  std::ostringstream out;
  for (const VerifyRow& r : rows) {
    char line[256];
    std::snprintf(line, sizeof(line), "[%s] %-36s stat=%-12.4g bound=%-10.4g %s\n",
                  r.pass ? "PASS" : "FAIL", r.name.c_str(), r.stat, r.threshold,
                  r.detail.c_str());
    out << line;
  }
  int passed = 0;
  for (const VerifyRow& r : rows) passed += r.pass ? 1 : 0;
  out << passed << "/" << rows.size() << " checks passed\n";
  return out.str();
}

std::string verify_csv(const std::vector<VerifyRow>& rows) {
  std::string out = "name,pass,stat,threshold,detail\n";
  for (const VerifyRow& r : rows) {
    char line[320];
    std::snprintf(line, sizeof(line), "%s,%d,%.17g,%.17g,%s\n", r.name.c_str(), r.pass ? 1 : 0,
                  r.stat, r.threshold, r.detail.c_str());
    out += line;
  }
  return out;
}

}  // namespace lcb
