#include "lcb/core.hpp"

namespace lcb {

LiftedAction lift(const Action& a) {
  LiftedAction la;
  la.coords = a.coords;
  la.coords.push_back(1.0);
  return la;
}

LiftedCov lifted_cov(const ActionDistribution& p, const ActionSet& a) {
  if (p.size() != a.size())
    throw std::invalid_argument("lifted_cov: distribution and action set are misaligned");
  const std::size_t n = a.dim() + 1;
  Mat m(n, n);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double w = p.weights[k];
    if (w == 0.0) continue;
    const Vec& c = a[k].coords;
    for (std::size_t i = 0; i < n; ++i) {
      const double ci = (i + 1 == n) ? 1.0 : c[i];
      for (std::size_t j = 0; j < n; ++j) {
        const double cj = (j + 1 == n) ? 1.0 : c[j];
        m(i, j) += w * ci * cj;
      }
    }
  }
  m.symmetrize();
  return LiftedCov{std::move(m)};
}

Vec mean_action(const ActionDistribution& p, const ActionSet& a) {
  if (p.size() != a.size())
    throw std::invalid_argument("mean_action: distribution and action set are misaligned");
  Vec m(a.dim(), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += p.weights[k] * a[k].coords[i];
  return m;
}

LiftedLoss lifted_loss(const Vec& y) {
  const std::size_t n = y.size() + 1;
  Mat m(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    m(i, n - 1) = 0.5 * y[i];
    m(n - 1, i) = 0.5 * y[i];
  }
  return LiftedLoss{std::move(m)};
}

double logdet_barrier(const Mat& h) {
  Mat s = h;
  s.symmetrize();
  const EigenSym e = eigen_sym(s);
  double logdet = 0.0;
  for (double v : e.values) {
    if (v <= 1e-12)
      throw SingularOrIndefinite("logdet_barrier: eigenvalue at or below 1e-12");
    logdet += std::log(v);
  }
  return -logdet;
}

double bregman_div(const Mat& g, const Mat& h) {
  if (g.rows() != h.rows() || g.cols() != h.cols())
    throw std::invalid_argument("bregman_div: shape mismatch");
  const double fg = logdet_barrier(g);   // -log det G
  const double fh = logdet_barrier(h);   // -log det H
  Cholesky ch(h);
  if (!ch.ok()) throw SingularOrIndefinite("bregman_div: H is not positive definite");
  const double tr = ch.solve(g).trace();  // tr(H^{-1} G)
  return (fg - fh) + tr - static_cast<double>(g.rows());
}

}  // namespace lcb
