#include "cccp/tyler.hpp"

#include <cmath>

namespace cccp {

TylerProblem::TylerProblem(Matrix samples, std::optional<double> shape_exponent)
    : a_(std::move(samples)),
      beta_(shape_exponent.value_or(0.5 * static_cast<double>(a_.cols()))) {
  if (a_.cols() == 0 || a_.rows() < a_.cols()) {
    throw Error(ErrorKind::DomainError,
                "TylerProblem: need at least d samples of dimension d >= 1");
  }
  if (!a_.allFinite()) {
    throw Error(ErrorKind::DomainError, "TylerProblem: non-finite sample");
  }
  if (a_.rowwise().norm().minCoeff() <= 0.0) {
    throw Error(ErrorKind::DomainError, "TylerProblem: zero sample");
  }
  if (!(beta_ > 0.0)) {
    throw Error(ErrorKind::DomainError, "TylerProblem: shape exponent must be positive");
  }
}

namespace {

void require_dim(const TylerProblem& p, const SpdMatrix& P) {
  if (P.dim() != p.d()) {
    throw Error(ErrorKind::DimMismatch, "tyler: matrix dimension does not match samples");
  }
}

// a_i^T P a_i for every sample.
Vector quadratic_forms(const TylerProblem& p, const SpdMatrix& P) {
  require_dim(p, P);
  return (p.samples() * P.mat()).cwiseProduct(p.samples()).rowwise().sum();
}

// sum_i w_i a_i a_i^T
Matrix weighted_outer(const TylerProblem& p, const Vector& w) {
  return p.samples().transpose() * w.asDiagonal() * p.samples();
}

double eval_h(const TylerProblem& p, const SpdMatrix& P) {
  return -p.coefficient() * quadratic_forms(p, P).array().log().sum();
}

SpdMatrix inverse_of_gradient(const SymMatrix& g) {
  try {
    return inverse(SpdMatrix(g));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CholeskyFailure) {
      throw Error(ErrorKind::SingularGradient,
                  "tyler_oracle: aggregate is not positive definite (samples do not span)");
    }
    throw;
  }
}

}  // namespace

double tyler_objective(const TylerProblem& p, const SpdMatrix& P) {
  return -logdet(P) - eval_h(p, P);
}

SymMatrix tyler_gradient_h(const TylerProblem& p, const SpdMatrix& P) {
  const Vector q = quadratic_forms(p, P);
  return SymMatrix::symmetrized(-p.coefficient() * weighted_outer(p, q.cwiseInverse()));
}

SpdMatrix trace_normalize(const SpdMatrix& x) {
  const double d = static_cast<double>(x.dim());
  return SpdMatrix::symmetrized(x.mat() * (d / x.mat().trace()));
}

SpdMatrix tyler_oracle(const SymMatrix& g, const SpdMatrix& anchor) {
  if (g.dim() != anchor.dim()) {
    throw Error(ErrorKind::DimMismatch, "tyler_oracle: dimension mismatch");
  }
  return trace_normalize(inverse_of_gradient(g));
}

double tyler_fixed_point_residual(const TylerProblem& p, const SpdMatrix& P) {
  const Vector q = quadratic_forms(p, P);
  const Matrix g = p.coefficient() * weighted_outer(p, q.cwiseInverse());
  return (P.mat() * g - Matrix::Identity(p.d(), p.d())).norm();
}

DcProblem<SpdMatrix> make_tyler_dc(std::shared_ptr<const TylerProblem> p) {
  DcProblem<SpdMatrix> dc;
  dc.eval_f = [](const SpdMatrix& P) { return -logdet(P); };
  dc.eval_h = [p](const SpdMatrix& P) { return eval_h(*p, P); };
  dc.grad_h = [p](const SpdMatrix& P) { return tyler_gradient_h(*p, P); };
  dc.oracle = [](const SymMatrix& grad_h, const SpdMatrix& anchor) {
    if (grad_h.dim() != anchor.dim()) {
      throw Error(ErrorKind::DimMismatch, "tyler_oracle: dimension mismatch");
    }
    return inverse_of_gradient(SymMatrix::symmetrized(-grad_h.mat()));
  };
  dc.gauge = trace_normalize;
  return dc;
}

FiniteSumDcProblem<SpdMatrix> make_tyler_finite_sum(std::shared_ptr<const TylerProblem> p) {
  FiniteSumDcProblem<SpdMatrix> fs;
  const double scale = 2.0 * p->shape_exponent();
  fs.m = static_cast<std::size_t>(p->n());
  fs.eval_f = [](const SpdMatrix& P) { return -logdet(P); };
  fs.eval_h_i = [p, scale](std::size_t i, const SpdMatrix& P) {
    const auto a = p->samples().row(static_cast<Eigen::Index>(i)).transpose();
    return -scale * std::log(a.dot(P.mat() * a));
  };
  fs.grad_h_i = [p, scale](std::size_t i, const SpdMatrix& P) {
    const Vector a = p->samples().row(static_cast<Eigen::Index>(i)).transpose();
    return SymMatrix::symmetrized((-scale / a.dot(P.mat() * a)) * (a * a.transpose()));
  };
  fs.oracle = [](const SymMatrix& grad_h, const SpdMatrix&) {
    return inverse_of_gradient(SymMatrix::symmetrized(-grad_h.mat()));
  };
  return fs;
}

namespace {

TylerResult finish(SolveResult<SpdMatrix> r) {
  SpdMatrix precision = trace_normalize(r.point);
  SpdMatrix scatter = trace_normalize(inverse(precision));
  return {std::move(precision), std::move(scatter), std::move(r.trace)};
}

}  // namespace

TylerResult solve_tyler(const TylerProblem& p, const SolverConfig& cfg) {
  const auto dc = make_tyler_dc(std::make_shared<const TylerProblem>(p));
  return finish(solve(dc, SpdMatrix::identity(p.d()), cfg));
}

TylerResult solve_tyler_incremental(const TylerProblem& p, const SolverConfig& cfg) {
  const auto fs = make_tyler_finite_sum(std::make_shared<const TylerProblem>(p));
  return finish(solve_incremental(fs, SpdMatrix::identity(p.d()), cfg));
}

}  // namespace cccp
