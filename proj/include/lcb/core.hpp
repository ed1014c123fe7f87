#pragma once

#include "lcb/types.hpp"

namespace lcb {

// a -> (a, 1).
LiftedAction lift(const Action& a);

// Cov-hat(p) = sum_i p_i (a_i,1)(a_i,1)^T over the set's actions.
LiftedCov lifted_cov(const ActionDistribution& p, const ActionSet& a);

// Mean feature E_{a~p}[a].
Vec mean_action(const ActionDistribution& p, const ActionSet& a);

// y -> [[0, y/2], [y^T/2, 0]], so that <lifted_cov(p,A), lifted_loss(y)>
// equals <mean_action(p,A), y> for every p and A.
LiftedLoss lifted_loss(const Vec& y);

// F(H) = -log det H. Throws SingularOrIndefinite when the smallest
// eigenvalue is at or below 1e-12; callers handle affine-hull reduction.
double logdet_barrier(const Mat& h);

// D_F(G, H) = log(det H / det G) + tr(H^{-1} G) - n for n-dimensional
// PD inputs. Nonnegative; zero iff G == H.
double bregman_div(const Mat& g, const Mat& h);

}  // namespace lcb
