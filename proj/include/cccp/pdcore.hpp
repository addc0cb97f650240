#pragma once

// Positive-definite matrix primitives and the metric layer on the PD cone.
//
// All matrix functions (sqrt, log, exp, powers) go through a symmetric
// eigendecomposition. Matrices handled here are small and dense.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "cccp/error.hpp"

namespace cccp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric real matrix; a tangent vector of the PD manifold or a Euclidean
/// gradient. No definiteness requirement.
class SymMatrix {
 public:
  /// Validates symmetry to 1e-12 * max(1, ||A||_F) and stores (A + A^T) / 2.
  explicit SymMatrix(const Matrix& entries);

  /// Stores (A + A^T) / 2 without the asymmetry check. For results that are
  /// symmetric in exact arithmetic (inverses, congruences, products X G X).
  static SymMatrix symmetrized(const Matrix& entries);
  static SymMatrix zero(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Matrix& mat() const noexcept { return m_; }
  double frobenius_norm() const { return m_.norm(); }

 private:
  struct Trusted {};
  SymMatrix(Matrix entries, Trusted) : m_(std::move(entries)) {}

  Matrix m_;
};

/// Symmetric positive-definite matrix, the manifold point type. The Cholesky
/// factor computed during validation is kept for solves and logdet.
class SpdMatrix {
 public:
  /// Throws DomainError on asymmetry, CholeskyFailure if not PD.
  explicit SpdMatrix(const Matrix& entries);
  explicit SpdMatrix(const SymMatrix& entries);

  /// Same as symmetrized() on SymMatrix, then Cholesky-validated.
  static SpdMatrix symmetrized(const Matrix& entries);
  static SpdMatrix identity(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Matrix& mat() const noexcept { return m_; }
  const Eigen::LLT<Matrix>& cholesky() const noexcept { return llt_; }

  /// X^{-1} * rhs via the stored factor.
  Matrix solve(const Matrix& rhs) const { return llt_.solve(rhs); }

 private:
  struct Trusted {};
  SpdMatrix(Matrix entries, Trusted);

  Matrix m_;
  Eigen::LLT<Matrix> llt_;
};

/// Entrywise positive vector: a point of the diagonal PD manifold (positive
/// orthant) used by matrix scaling.
class PositiveVector {
 public:
  explicit PositiveVector(Vector entries);

  Eigen::Index dim() const noexcept { return v_.size(); }
  const Vector& vec() const noexcept { return v_; }

 private:
  Vector v_;
};

struct EigDecomp {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthogonal, columns match eigenvalues
};

/// Symmetric eigendecomposition. Throws EigFailure when the solver does not
/// converge or produces non-finite output.
EigDecomp eig_sym(const Matrix& symmetric);

/// V diag(fn(lambda)) V^T.
template <class Fn>
Matrix spectral_apply(const EigDecomp& e, Fn&& fn) {
  Vector mapped = e.eigenvalues.unaryExpr(fn);
  return e.eigenvectors * mapped.asDiagonal() * e.eigenvectors.transpose();
}

double frobenius_inner(const Matrix& a, const Matrix& b);

double logdet(const SpdMatrix& x);
SpdMatrix inverse(const SpdMatrix& x);

SpdMatrix matrix_sqrt(const SpdMatrix& x);
SpdMatrix matrix_inv_sqrt(const SpdMatrix& x);
SpdMatrix matrix_power(const SpdMatrix& x, double s);
SymMatrix matrix_log(const SpdMatrix& x);
SpdMatrix matrix_exp(const SymMatrix& s);

/// Eigenvalues of X^{-1} Y (ascending), computed on L^{-1} Y L^{-T} with
/// X = L L^T.
Vector generalized_eigenvalues(const SpdMatrix& x, const SpdMatrix& y);

/// Affine-invariant distance ||log(X^{-1/2} Y X^{-1/2})||_F.
double riemannian_distance(const SpdMatrix& x, const SpdMatrix& y);
/// Diagonal-manifold distance ||log(y ./ x)||_2.
double riemannian_distance(const PositiveVector& x, const PositiveVector& y);

/// Thompson metric: operator-norm version of riemannian_distance.
double thompson_distance(const SpdMatrix& x, const SpdMatrix& y);

/// X^{1/2} (X^{-1/2} Y X^{-1/2})^s X^{1/2}, s in [0, 1].
SpdMatrix geodesic(const SpdMatrix& x, const SpdMatrix& y, double s);

/// RHS - LHS of ||x - y||^2 <= sqrt(2) (e^d - 1)/e^d * max(||x||, ||y||)
/// (Frobenius norms, d the Riemannian distance), evaluated as printed. The
/// inequality is not homogeneous, so this is a probe, not an assertion.
double metric_relation_gap(const SpdMatrix& x, const SpdMatrix& y);

}  // namespace cccp
