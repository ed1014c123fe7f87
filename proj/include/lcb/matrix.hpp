#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcb {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);

// Thrown when an operation requires a positive definite matrix and the input
// has an eigenvalue at or below the singularity tolerance (1e-12).
struct SingularOrIndefinite : std::runtime_error {
  explicit SingularOrIndefinite(const std::string& what) : std::runtime_error(what) {}
};

// Dense row-major matrix sized for the small dimensions used here (<= ~10).
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  static Mat identity(std::size_t n);
  static Mat outer(const Vec& u, const Vec& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double s);
  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(double s) const;
  Mat operator*(const Mat& o) const;
  Vec operator*(const Vec& v) const;

  double trace() const;
  // (M + M^T)/2, in place. Kills accumulated floating-point asymmetry.
  void symmetrize();
  double max_abs() const { double m = 0; for (double x : a_) m = std::max(m, std::abs(x)); return m; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  Vec a_;
};

// Frobenius inner product <A, B>.
double frob_inner(const Mat& a, const Mat& b);

// Cholesky factorization M = L L^T of a symmetric positive definite matrix.
// ok() is set instead of throwing so hot loops can probe feasibility;
// factor() reuses the internal storage across calls.
class Cholesky {
 public:
  Cholesky() = default;
  explicit Cholesky(const Mat& m, double pivot_tol = 1e-13) { factor(m, pivot_tol); }
  bool factor(const Mat& m, double pivot_tol = 1e-13);
  bool ok() const { return ok_; }
  double logdet() const;              // requires ok()
  Vec solve(const Vec& b) const;      // requires ok()
  Mat solve(const Mat& b) const;      // requires ok()
  Mat inverse() const;                // requires ok()
  // b^T M^{-1} b through the factor, using `work` as scratch (no allocation).
  double inv_quad(const Vec& b, Vec& work) const;

 private:
  std::size_t n_ = 0;
  Mat l_;
  bool ok_ = false;
};

// Symmetric eigendecomposition by cyclic Jacobi rotations.
// values are ascending; columns of vectors are the matching eigenvectors.
struct EigenSym {
  Vec values;
  Mat vectors;
};
EigenSym eigen_sym(const Mat& m);

double min_eigenvalue(const Mat& m);

// Moore-Penrose pseudo-inverse of a symmetric PSD matrix. Eigenvalues at or
// below rel_cutoff * max(|eigenvalue|) are treated as zero.
Mat pinv_psd(const Mat& m, double rel_cutoff = 1e-10);

// Inverse of a symmetric positive definite matrix; throws SingularOrIndefinite.
Mat inverse_spd(const Mat& m);

}  // namespace lcb
