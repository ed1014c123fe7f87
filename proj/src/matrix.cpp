#include "lcb/matrix.hpp"

#include <cmath>

namespace lcb {

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::outer(const Vec& u, const Vec& v) {
  Mat m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

Mat& Mat::operator+=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Mat +=: shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Mat -=: shape mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

Mat Mat::operator+(const Mat& o) const { Mat r = *this; r += o; return r; }
Mat Mat::operator-(const Mat& o) const { Mat r = *this; r -= o; return r; }
Mat Mat::operator*(double s) const { Mat r = *this; r *= s; return r; }

Mat Mat::operator*(const Mat& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("Mat *: shape mismatch");
  Mat r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
    }
  return r;
}

Vec Mat::operator*(const Vec& v) const {
  if (cols_ != v.size()) throw std::invalid_argument("Mat * vec: shape mismatch");
  Vec r(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

double Mat::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

void Mat::symmetrize() {
  if (rows_ != cols_) throw std::invalid_argument("symmetrize: matrix not square");
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j) {
      const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
      (*this)(i, j) = v;
      (*this)(j, i) = v;
    }
}

double frob_inner(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("frob_inner: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * b(i, j);
  return s;
}

bool Cholesky::factor(const Mat& m, double pivot_tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("Cholesky: matrix not square");
  if (n_ != m.rows()) {
    n_ = m.rows();
    l_ = Mat(n_, n_);
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < n_; ++i) scale = std::max(scale, std::abs(m(i, i)));
  const double floor = pivot_tol * std::max(1.0, scale);
  ok_ = true;
  for (std::size_t j = 0; j < n_; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
    if (!(d > floor)) {
      ok_ = false;
      return false;
    }
    l_(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n_; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
      l_(i, j) = s / l_(j, j);
    }
  }
  return true;
}

double Cholesky::inv_quad(const Vec& b, Vec& work) const {
  if (!ok_) throw SingularOrIndefinite("inv_quad with a non-PD matrix");
  if (b.size() != n_) throw std::invalid_argument("Cholesky::inv_quad: size mismatch");
  work.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * work[k];
    work[i] = s / l_(i, i);
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    double s = work[ii];
    for (std::size_t k = ii + 1; k < n_; ++k) s -= l_(k, ii) * work[k];
    work[ii] = s / l_(ii, ii);
  }
  return dot(b, work);
}

double Cholesky::logdet() const {
  if (!ok_) throw SingularOrIndefinite("logdet of a non-PD matrix");
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += std::log(l_(i, i));
  return 2.0 * s;
}

Vec Cholesky::solve(const Vec& b) const {
  if (!ok_) throw SingularOrIndefinite("solve with a non-PD matrix");
  if (b.size() != n_) throw std::invalid_argument("Cholesky::solve: size mismatch");
  Vec y(n_), x(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * y[k];
    y[i] = s / l_(i, i);
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n_; ++k) s -= l_(k, ii) * x[k];
    x[ii] = s / l_(ii, ii);
  }
  return x;
}

Mat Cholesky::solve(const Mat& b) const {
  if (b.rows() != n_) throw std::invalid_argument("Cholesky::solve: shape mismatch");
  Mat r(n_, b.cols());
  Vec col(n_);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < n_; ++i) col[i] = b(i, j);
    Vec x = solve(col);
    for (std::size_t i = 0; i < n_; ++i) r(i, j) = x[i];
  }
  return r;
}

Mat Cholesky::inverse() const {
  Mat inv = solve(Mat::identity(n_));
  inv.symmetrize();
  return inv;
}

EigenSym eigen_sym(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigen_sym: matrix not square");
  const std::size_t n = m.rows();
  Mat a = m;
  a.symmetrize();
  Mat v = Mat::identity(n);
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30 * std::max(1.0, a.max_abs() * a.max_abs())) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  EigenSym e;
  e.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.values[i] = a(i, i);
  // Sort ascending, permuting eigenvector columns alongside.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return e.values[x] < e.values[y]; });
  Vec sorted(n);
  Mat vs(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    sorted[j] = e.values[order[j]];
    for (std::size_t i = 0; i < n; ++i) vs(i, j) = v(i, order[j]);
  }
  e.values = std::move(sorted);
  e.vectors = std::move(vs);
  return e;
}

double min_eigenvalue(const Mat& m) { return eigen_sym(m).values.front(); }

Mat pinv_psd(const Mat& m, double rel_cutoff) {
  const EigenSym e = eigen_sym(m);
  const std::size_t n = m.rows();
  double lmax = 0.0;
  for (double v : e.values) lmax = std::max(lmax, std::abs(v));
  const double cutoff = rel_cutoff * std::max(lmax, 1e-300);
  Mat r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (e.values[k] <= cutoff) continue;
    const double w = 1.0 / e.values[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) += w * e.vectors(i, k) * e.vectors(j, k);
  }
  r.symmetrize();
  return r;
}

Mat inverse_spd(const Mat& m) {
  Cholesky chol(m);
  if (!chol.ok()) throw SingularOrIndefinite("inverse_spd: matrix is not positive definite");
  return chol.inverse();
}

}  // namespace lcb
