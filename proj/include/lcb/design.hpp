#pragma once

#include "lcb/core.hpp"
#include "lcb/types.hpp"

namespace lcb {

// Orthonormal chart of the affine hull of an action set: every action
// reconstructs as base + basis^T * reduce(a) within 1e-9.
struct AffineReduction {
  Action base;
  Mat basis;   // rank x d, orthonormal rows
  std::size_t rank = 0;

  Vec reduce(const Action& a) const;       // coordinates in the hull, length rank
  Vec reconstruct(const Vec& coords) const;  // back to ambient space, length d
};

// Linear term Z (accumulated lifted losses minus bonuses) and learning rate
// of one FTRL step min_p <Cov-hat(p), Z> + F(Cov-hat(p)) / eta.
struct FtrlObjective {
  Mat z;       // (d+1) x (d+1) symmetric
  double eta;  // > 0

  FtrlObjective(Mat z_in, double eta_in);
};

struct SolverReport {
  long iterations = 0;
  double final_gap = 0.0;
  double objective = 0.0;
  bool converged = true;  // false records NoConvergence; never fatal
};

// Pivoted orthogonalization of {a_i - a_0} at tolerance 1e-10; singleton
// sets give rank 0.
AffineReduction affine_reduce(const ActionSet& a);

constexpr double kDefaultFwTol = 1e-6;

// Budget 10 * |A| * (r+1)^2 with a floor of 200.
long default_max_iter(std::size_t n_actions, std::size_t rank);

// Frank-Wolfe minimization of f(p) = <Cov-hat(p), Z> + F(M(p))/eta over the
// simplex, where M(p) is the lifted covariance in the (rank+1)-dimensional
// chart of affine_reduce (the linear term stays in the full lifted space).
// Exact line search via the rank-one determinant update; vertex ties break
// to the lowest action index; uniform initialization. Terminates when the
// duality gap is at most tol * max(1, |objective|) or at max_iter
// (max_iter <= 0 selects default_max_iter).
// objective_trace, when given, records f(p_k) per iteration. warm_start,
// when given and aligned, replaces the uniform initialization with
// 0.999 * warm + 0.001 * uniform (strictly feasible); the solved round of a
// slowly-moving objective then needs only a few repair iterations.
std::pair<ActionDistribution, SolverReport> solve_ftrl_step(const ActionSet& a,
                                                            const FtrlObjective& obj,
                                                            double tol = kDefaultFwTol,
                                                            long max_iter = 0,
                                                            std::vector<double>* objective_trace = nullptr,
                                                            const Vec* warm_start = nullptr);

// Frank-Wolfe duality gap of p for the same objective; zero iff optimal,
// +infinity when Cov-hat(p) is singular on the hull (boundary point).
double fw_gap(const ActionDistribution& p, const ActionSet& a, const FtrlObjective& obj);

// G-optimal exploration design: returns nu with
// max_a ||a||^2_{G(nu)^+} <= rank(span A) + tol, G(nu) = E_{a~nu}[a a^T]
// (no lifting), via D-optimal Frank-Wolfe in the linear span of A.
std::pair<ActionDistribution, SolverReport> g_optimal_design(const ActionSet& a,
                                                             double tol = 1e-6,
                                                             long max_iter = 0);

// max_i a_i^T G(nu)^+ a_i with pseudo-inverse cutoff 1e-10.
double max_leverage(const ActionDistribution& nu, const ActionSet& a);

}  // namespace lcb
