#include "cccp/pdcore.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "cccp/diagnostics.hpp"

namespace cccp {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kConditionWarn = 1e12;

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << a.rows() << "x"
       << a.cols();
    throw Error(ErrorKind::DimMismatch, os.str());
  }
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw Error(ErrorKind::DomainError,
                std::string(what) + ": non-finite entries");
  }
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw Error(ErrorKind::DimMismatch, os.str());
  }
}

Matrix checked_symmetric_part(const Matrix& a, const char* what) {
  require_square(a, what);
  require_finite(a, what);
  const double scale = std::max(1.0, a.norm());
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (a.size() > 0 && asym > kSymmetryTol * scale) {
    std::ostringstream os;
    os << what << ": matrix is not symmetric (max |A_ij - A_ji| = " << asym
       << ")";
    throw Error(ErrorKind::DomainError, os.str());
  }
  return 0.5 * (a + a.transpose());
}

void warn_if_ill_conditioned(const Vector& eigenvalues, const char* where) {
  if (eigenvalues.size() == 0) return;
  const double lo = eigenvalues.minCoeff();
  const double hi = eigenvalues.maxCoeff();
  if (lo > 0 && hi / lo > kConditionWarn) {
    std::ostringstream os;
    os << where << ": condition number " << hi / lo << " exceeds 1e12";
    warn(os.str());
  }
}

EigDecomp eig_of(const SpdMatrix& x, const char* where) {
  EigDecomp e = eig_sym(x.mat());
  warn_if_ill_conditioned(e.eigenvalues, where);
  return e;
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& entries)
    : m_(checked_symmetric_part(entries, "SymMatrix")) {}

SymMatrix SymMatrix::symmetrized(const Matrix& entries) {
  require_square(entries, "SymMatrix");
  require_finite(entries, "SymMatrix");
  return SymMatrix(0.5 * (entries + entries.transpose()), Trusted{});
}

SymMatrix SymMatrix::zero(Eigen::Index dim) {
  return SymMatrix(Matrix::Zero(dim, dim), Trusted{});
}

SpdMatrix::SpdMatrix(Matrix entries, Trusted) : m_(std::move(entries)) {
  if (m_.rows() == 0) {
    throw Error(ErrorKind::DomainError, "SpdMatrix: empty matrix");
  }
  llt_.compute(m_);
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorKind::CholeskyFailure,
                "SpdMatrix: Cholesky factorization failed (not positive "
                "definite)");
  }
  const auto diag = llt_.matrixLLT().diagonal();
  if (!diag.allFinite() || diag.minCoeff() <= 0.0) {
    throw Error(ErrorKind::CholeskyFailure,
                "SpdMatrix: non-positive Cholesky pivot");
  }
}

SpdMatrix::SpdMatrix(const Matrix& entries)
    : SpdMatrix(checked_symmetric_part(entries, "SpdMatrix"), Trusted{}) {}

SpdMatrix::SpdMatrix(const SymMatrix& entries)
    : SpdMatrix(entries.mat(), Trusted{}) {}

SpdMatrix SpdMatrix::symmetrized(const Matrix& entries) {
  require_square(entries, "SpdMatrix");
  require_finite(entries, "SpdMatrix");
  return SpdMatrix(0.5 * (entries + entries.transpose()), Trusted{});
}

SpdMatrix SpdMatrix::identity(Eigen::Index dim) {
  return SpdMatrix(Matrix::Identity(dim, dim), Trusted{});
}

PositiveVector::PositiveVector(Vector entries) : v_(std::move(entries)) {
  if (v_.size() == 0) {
    throw Error(ErrorKind::DomainError, "PositiveVector: empty vector");
  }
  if (!v_.allFinite() || v_.minCoeff() <= 0.0) {
    throw Error(ErrorKind::DomainError,
                "PositiveVector: entries must be finite and positive");
  }
}

EigDecomp eig_sym(const Matrix& symmetric) {
  require_square(symmetric, "eig_sym");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
  if (solver.info() != Eigen::Success || !solver.eigenvalues().allFinite()) {
    throw Error(ErrorKind::EigFailure,
                "eig_sym: symmetric eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double frobenius_inner(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b).sum();
}

double logdet(const SpdMatrix& x) {
  const auto diag = x.cholesky().matrixLLT().diagonal();
  // Squared pivot ratio is a lower bound on the condition number.
  const double ratio = diag.maxCoeff() / diag.minCoeff();
  if (ratio * ratio > kConditionWarn) {
    warn("logdet: condition number exceeds 1e12; value may be inaccurate");
  }
  return 2.0 * diag.array().log().sum();
}

SpdMatrix inverse(const SpdMatrix& x) {
  const Eigen::Index d = x.dim();
  return SpdMatrix::symmetrized(x.solve(Matrix::Identity(d, d)));
}

SpdMatrix matrix_sqrt(const SpdMatrix& x) {
  const EigDecomp e = eig_of(x, "matrix_sqrt");
  return SpdMatrix::symmetrized(
      spectral_apply(e, [](double l) { return std::sqrt(l); }));
}

SpdMatrix matrix_inv_sqrt(const SpdMatrix& x) {
  const EigDecomp e = eig_of(x, "matrix_inv_sqrt");
  return SpdMatrix::symmetrized(
      spectral_apply(e, [](double l) { return 1.0 / std::sqrt(l); }));
}

SpdMatrix matrix_power(const SpdMatrix& x, double s) {
  const EigDecomp e = eig_of(x, "matrix_power");
  return SpdMatrix::symmetrized(
      spectral_apply(e, [s](double l) { return std::pow(l, s); }));
}

SymMatrix matrix_log(const SpdMatrix& x) {
  const EigDecomp e = eig_of(x, "matrix_log");
  if (e.eigenvalues.minCoeff() <= 0.0) {
    throw Error(ErrorKind::EigFailure,
                "matrix_log: non-positive eigenvalue from eigensolver");
  }
  return SymMatrix::symmetrized(
      spectral_apply(e, [](double l) { return std::log(l); }));
}

SpdMatrix matrix_exp(const SymMatrix& s) {
  const EigDecomp e = eig_sym(s.mat());
  Matrix out = spectral_apply(e, [](double l) { return std::exp(l); });
  if (!out.allFinite()) {
    throw Error(ErrorKind::DomainError, "matrix_exp: overflow");
  }
  return SpdMatrix::symmetrized(out);
}

Vector generalized_eigenvalues(const SpdMatrix& x, const SpdMatrix& y) {
  require_same_dim(x.dim(), y.dim(), "generalized_eigenvalues");
  const auto l = x.cholesky().matrixL();
  // C = L^{-1} Y L^{-T} is similar to X^{-1} Y.
  const Matrix half = l.solve(y.mat());
  Matrix c = l.solve(Matrix(half.transpose()));
  c = 0.5 * (c + c.transpose());
  return eig_sym(c).eigenvalues;
}

double riemannian_distance(const SpdMatrix& x, const SpdMatrix& y) {
  const Vector lambda = generalized_eigenvalues(x, y);
  return std::sqrt(lambda.array().log().square().sum());
}

double riemannian_distance(const PositiveVector& x, const PositiveVector& y) {
  require_same_dim(x.dim(), y.dim(), "riemannian_distance");
  return (y.vec().array() / x.vec().array()).log().matrix().norm();
}

double thompson_distance(const SpdMatrix& x, const SpdMatrix& y) {
  const Vector lambda = generalized_eigenvalues(x, y);
  return lambda.array().log().abs().maxCoeff();
}

SpdMatrix geodesic(const SpdMatrix& x, const SpdMatrix& y, double s) {
  require_same_dim(x.dim(), y.dim(), "geodesic");
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error(ErrorKind::DomainError, "geodesic: s must lie in [0, 1]");
  }
  const EigDecomp ex = eig_of(x, "geodesic");
  const Matrix half = spectral_apply(ex, [](double l) { return std::sqrt(l); });
  const Matrix inv_half =
      spectral_apply(ex, [](double l) { return 1.0 / std::sqrt(l); });
  const Matrix inner = inv_half * y.mat() * inv_half;
  const EigDecomp ei = eig_sym(0.5 * (inner + inner.transpose()));
  const Matrix powered =
      spectral_apply(ei, [s](double l) { return std::pow(l, s); });
  return SpdMatrix::symmetrized(half * powered * half);
}

double metric_relation_gap(const SpdMatrix& x, const SpdMatrix& y) {
  require_same_dim(x.dim(), y.dim(), "metric_relation_gap");
  const double d = riemannian_distance(x, y);
  const double lhs = (x.mat() - y.mat()).squaredNorm();
  const double rhs = std::sqrt(2.0) * (-std::expm1(-d)) *
                     std::max(x.mat().norm(), y.mat().norm());
  return rhs - lhs;
}

}  // namespace cccp
