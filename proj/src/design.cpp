#include "lcb/design.hpp"

#include <cmath>
#include <limits>

namespace lcb {

Vec AffineReduction::reduce(const Action& a) const {
  Vec diff(a.coords.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.coords[i] - base.coords[i];
  Vec c(rank, 0.0);
  for (std::size_t r = 0; r < rank; ++r) {
    double s = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) s += basis(r, i) * diff[i];
    c[r] = s;
  }
  return c;
}

Vec AffineReduction::reconstruct(const Vec& coords) const {
  Vec x = base.coords;
  for (std::size_t r = 0; r < rank; ++r)
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += basis(r, i) * coords[r];
  return x;
}

FtrlObjective::FtrlObjective(Mat z_in, double eta_in) : z(std::move(z_in)), eta(eta_in) {
  if (!(eta > 0.0)) throw std::invalid_argument("FtrlObjective: eta must be positive");
  if (z.rows() != z.cols()) throw std::invalid_argument("FtrlObjective: Z must be square");
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = i + 1; j < z.cols(); ++j)
      if (std::abs(z(i, j) - z(j, i)) > 1e-10)
        throw std::invalid_argument("FtrlObjective: Z must be symmetric within 1e-10");
}

namespace {

constexpr double kOrthTol = 1e-10;

// Pivoted modified Gram-Schmidt over a set of direction vectors.
Mat orthonormal_rows(std::vector<Vec> dirs, std::size_t dim, std::size_t* rank_out) {
  std::vector<Vec> rows;
  while (true) {
    std::size_t best = dirs.size();
    double best_norm = kOrthTol;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      const double n = norm2(dirs[i]);
      if (n > best_norm) {
        best_norm = n;
        best = i;
      }
    }
    if (best == dirs.size()) break;
    Vec u = dirs[best];
    for (double& x : u) x /= best_norm;
    for (Vec& d : dirs) {
      const double proj = dot(u, d);
      for (std::size_t i = 0; i < dim; ++i) d[i] -= proj * u[i];
    }
    rows.push_back(std::move(u));
  }
  Mat basis(rows.size(), dim);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t i = 0; i < dim; ++i) basis(r, i) = rows[r][i];
  *rank_out = rows.size();
  return basis;
}

//1-D exact minimization of
//   phi(s) = s * dl - (1/eta) * [(m-1) log(1-s) + log(1 + s (q-1))]
// over s in [0, 1), the restriction of the objective to the Frank-Wolfe
// segment (1-s) M + s cc^T with q = c^T M^{-1} c. Convex; Newton with
// bisection fallback to 1e-12 in s.
double exact_line_search(double dl, double q, double m, double eta) {
  const double smax = 1.0 - 1e-12;
  auto dphi = [&](double s) {
    return dl + (1.0 / eta) * ((m - 1.0) / (1.0 - s) - (q - 1.0) / (1.0 + s * (q - 1.0)));
  };
  auto d2phi = [&](double s) {
    const double u = 1.0 + s * (q - 1.0);
    return (1.0 / eta) * ((m - 1.0) / ((1.0 - s) * (1.0 - s)) + (q - 1.0) * (q - 1.0) / (u * u));
  };
  if (dphi(0.0) >= 0.0) return 0.0;
  if (dphi(smax) <= 0.0) return smax;
  double lo = 0.0, hi = smax, s = 0.5 * smax;
  for (int it = 0; it < 200; ++it) {
    const double g = dphi(s);
    if (g > 0.0)
      hi = s;
    else
      lo = s;
    if (hi - lo <= 1e-12) break;
    const double h = d2phi(s);
    double step = (h > 0.0) ? s - g / h : 0.5 * (lo + hi);
    if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
    s = step;
  }
  return 0.5 * (lo + hi);
}

// Shared Frank-Wolfe engine over reduced coordinates. `lin` holds the full
// lifted-space linear coefficient of each vertex; `verts` the reduced lifted
// coordinates; eta scales the barrier.
struct FwProblem {
  std::vector<Vec> verts;   // per action, length m
  Vec lin;                  // per action, <vertex lifted outer, Z>
  double eta = 1.0;
  std::size_t m = 0;        // reduced dimension
};

void fill_mix_matrix(const FwProblem& prob, const Vec& p, Mat& mm) {
  for (std::size_t i = 0; i < prob.m; ++i)
    for (std::size_t j = 0; j < prob.m; ++j) mm(i, j) = 0.0;
  for (std::size_t k = 0; k < prob.verts.size(); ++k) {
    if (p[k] == 0.0) continue;
    const Vec& c = prob.verts[k];
    for (std::size_t i = 0; i < prob.m; ++i)
      for (std::size_t j = 0; j < prob.m; ++j) mm(i, j) += p[k] * c[i] * c[j];
  }
  mm.symmetrize();
}

struct FwState {
  Vec p;
  double objective = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  long iterations = 0;
  bool converged = false;
};

FwState run_frank_wolfe(const FwProblem& prob, double tol, long max_iter,
                        std::vector<double>* objective_trace, const Vec* warm_start) {
  const std::size_t n = prob.verts.size();
  FwState st;
  st.p.assign(n, 1.0 / static_cast<double>(n));
  if (warm_start && warm_start->size() == n) {
    for (std::size_t k = 0; k < n; ++k)
      st.p[k] = 0.999 * (*warm_start)[k] + 0.001 * st.p[k];
  }
  const double m = static_cast<double>(prob.m);
  Vec q(n, 0.0);
  Mat mm(prob.m, prob.m);
  Cholesky chol;
  Vec work;
  for (long it = 0; it <= max_iter; ++it) {
    fill_mix_matrix(prob, st.p, mm);
    if (!chol.factor(mm))
      throw SingularOrIndefinite("frank_wolfe: reduced covariance lost rank");
    double lin_p = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      q[k] = chol.inv_quad(prob.verts[k], work);
      lin_p += st.p[k] * prob.lin[k];
    }
    st.objective = lin_p - chol.logdet() / prob.eta;
    if (objective_trace) objective_trace->push_back(st.objective);
    // Directional value of each vertex; ties break to the lowest index.
    std::size_t best = 0;
    double best_s = std::numeric_limits<double>::infinity();
    double mean_s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double sk = prob.lin[k] - q[k] / prob.eta;
      mean_s += st.p[k] * sk;
      if (sk < best_s) {
        best_s = sk;
        best = k;
      }
    }
    st.gap = mean_s - best_s;
    st.iterations = it;
    if (st.gap <= tol * std::max(1.0, std::abs(st.objective))) {
      st.converged = true;
      return st;
    }
    if (it == max_iter) break;
    const double dl = prob.lin[best] - lin_p;
    const double s = exact_line_search(dl, q[best], m, prob.eta);
    if (s == 0.0) {
      st.converged = true;  // no descent along the best vertex: stationary
      return st;
    }
    for (double& w : st.p) w *= (1.0 - s);
    st.p[best] += s;
  }
  st.converged = false;
  return st;
}

double vertex_linear_term(const Action& a, const Mat& z) {
  // <(a,1)(a,1)^T, Z> without materializing the outer product.
  const std::size_t d = a.coords.size();
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) s += a.coords[i] * a.coords[j] * z(i, j);
    s += 2.0 * a.coords[i] * z(i, d);
  }
  s += z(d, d);
  return s;
}

FwProblem build_ftrl_problem(const ActionSet& a, const FtrlObjective& obj,
                             const AffineReduction& red) {
  FwProblem prob;
  prob.eta = obj.eta;
  prob.m = red.rank + 1;
  prob.verts.reserve(a.size());
  prob.lin.reserve(a.size());
  for (const Action& act : a.actions()) {
    Vec c = red.reduce(act);
    c.push_back(1.0);
    prob.verts.push_back(std::move(c));
    prob.lin.push_back(vertex_linear_term(act, obj.z));
  }
  return prob;
}

}  // namespace

AffineReduction affine_reduce(const ActionSet& a) {
  AffineReduction red;
  red.base = a[0];
  const std::size_t d = a.dim();
  std::vector<Vec> dirs;
  dirs.reserve(a.size());
  for (std::size_t k = 1; k < a.size(); ++k) {
    Vec v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = a[k].coords[i] - red.base.coords[i];
    dirs.push_back(std::move(v));
  }
  red.basis = orthonormal_rows(std::move(dirs), d, &red.rank);
  return red;
}

long default_max_iter(std::size_t n_actions, std::size_t rank) {
  const long budget = 10L * static_cast<long>(n_actions) *
                      static_cast<long>((rank + 1) * (rank + 1));
  return std::max(200L, budget);
}

std::pair<ActionDistribution, SolverReport> solve_ftrl_step(const ActionSet& a,
                                                            const FtrlObjective& obj,
                                                            double tol, long max_iter,
                                                            std::vector<double>* objective_trace,
                                                            const Vec* warm_start) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_ftrl_step: tol must be positive");
  if (a.dim() + 1 != obj.z.rows())
    throw std::invalid_argument("solve_ftrl_step: Z dimension does not match the action set");
  SolverReport rep;
  if (a.size() == 1) {
    rep.objective = vertex_linear_term(a[0], obj.z);  // reduced barrier is log det [1] = 0
    return {ActionDistribution(Vec{1.0}), rep};
  }
  const AffineReduction red = affine_reduce(a);
  if (red.rank == 0) {
    // All actions coincide; any distribution induces the same covariance.
    Vec w(a.size(), 1.0 / static_cast<double>(a.size()));
    rep.objective = vertex_linear_term(a[0], obj.z);
    return {ActionDistribution(std::move(w)), rep};
  }
  const FwProblem prob = build_ftrl_problem(a, obj, red);
  if (max_iter <= 0) max_iter = default_max_iter(a.size(), red.rank);
  FwState st = run_frank_wolfe(prob, tol, max_iter, objective_trace, warm_start);
  rep.iterations = st.iterations;
  rep.final_gap = st.gap;
  rep.objective = st.objective;
  rep.converged = st.converged;
  // Exact renormalization guards the 1e-9 simplex contract.
  double sum = 0.0;
  for (double w : st.p) sum += w;
  for (double& w : st.p) w /= sum;
  return {ActionDistribution(std::move(st.p)), rep};
}

double fw_gap(const ActionDistribution& p, const ActionSet& a, const FtrlObjective& obj) {
  if (p.size() != a.size()) throw std::invalid_argument("fw_gap: misaligned inputs");
  if (a.size() == 1) return 0.0;
  const AffineReduction red = affine_reduce(a);
  if (red.rank == 0) return 0.0;
  const FwProblem prob = build_ftrl_problem(a, obj, red);
  Mat mm(prob.m, prob.m);
  fill_mix_matrix(prob, p.weights, mm);
  Cholesky chol(mm);
  if (!chol.ok()) return std::numeric_limits<double>::infinity();
  Vec work;
  double mean_s = 0.0;
  double best_s = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double sk = prob.lin[k] - chol.inv_quad(prob.verts[k], work) / prob.eta;
    mean_s += p.weights[k] * sk;
    best_s = std::min(best_s, sk);
  }
  return mean_s - best_s;
}

std::pair<ActionDistribution, SolverReport> g_optimal_design(const ActionSet& a, double tol,
                                                             long max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("g_optimal_design: tol must be positive");
  SolverReport rep;
  if (a.size() == 1) return {ActionDistribution(Vec{1.0}), rep};
  // Chart of the linear span (no base point; rank by the same 1e-10 cutoff).
  const std::size_t d = a.dim();
  std::vector<Vec> dirs;
  dirs.reserve(a.size());
  for (const Action& act : a.actions()) dirs.push_back(act.coords);
  std::size_t rank = 0;
  const Mat basis = orthonormal_rows(std::move(dirs), d, &rank);
  if (rank == 0) {
    // Only possible when every action is the zero vector.
    Vec w(a.size(), 1.0 / static_cast<double>(a.size()));
    return {ActionDistribution(std::move(w)), rep};
  }
  FwProblem prob;
  prob.eta = 1.0;
  prob.m = rank;
  prob.verts.reserve(a.size());
  prob.lin.assign(a.size(), 0.0);
  for (const Action& act : a.actions()) {
    Vec c(rank, 0.0);
    for (std::size_t r = 0; r < rank; ++r) {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += basis(r, i) * act.coords[i];
      c[r] = s;
    }
    prob.verts.push_back(std::move(c));
  }
  if (max_iter <= 0) max_iter = default_max_iter(a.size(), rank);
  // The duality gap of the pure barrier objective is max leverage minus rank,
  // so an absolute gap of tol certifies the design bound directly.
  const std::size_t n = a.size();
  FwState st;
  st.p.assign(n, 1.0 / static_cast<double>(n));
  Vec q(n, 0.0);
  Mat mm(prob.m, prob.m);
  Cholesky chol;
  Vec work;
  for (long it = 0; it <= max_iter; ++it) {
    fill_mix_matrix(prob, st.p, mm);
    if (!chol.factor(mm))
      throw SingularOrIndefinite("g_optimal_design: design matrix lost rank");
    std::size_t best = 0;
    double q_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      q[k] = chol.inv_quad(prob.verts[k], work);
      if (q[k] > q_max) {
        q_max = q[k];
        best = k;
      }
    }
    st.objective = -chol.logdet();
    st.gap = q_max - static_cast<double>(rank);
    st.iterations = it;
    if (st.gap <= tol) {
      st.converged = true;
      break;
    }
    if (it == max_iter) {
      st.converged = false;
      break;
    }
    const double s = exact_line_search(0.0, q[best], static_cast<double>(rank), 1.0);
    if (s == 0.0) {
      st.converged = true;
      break;
    }
    for (double& w : st.p) w *= (1.0 - s);
    st.p[best] += s;
  }
  rep.iterations = st.iterations;
  rep.final_gap = st.gap;
  rep.objective = st.objective;
  rep.converged = st.converged;
  double sum = 0.0;
  for (double w : st.p) sum += w;
  for (double& w : st.p) w /= sum;
  return {ActionDistribution(std::move(st.p)), rep};
}

double max_leverage(const ActionDistribution& nu, const ActionSet& a) {
  if (nu.size() != a.size()) throw std::invalid_argument("max_leverage: misaligned inputs");
  const std::size_t d = a.dim();
  Mat g(d, d);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (nu.weights[k] == 0.0) continue;
    const Vec& c = a[k].coords;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) g(i, j) += nu.weights[k] * c[i] * c[j];
  }
  g.symmetrize();
  const Mat gp = pinv_psd(g);
  double best = 0.0;
  for (const Action& act : a.actions()) best = std::max(best, dot(act.coords, gp * act.coords));
  return best;
}

}  // namespace lcb
