#include "cccp/scaling.hpp"

#include <cmath>

namespace cccp {

ScalingProblem::ScalingProblem(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw Error(ErrorKind::DimMismatch, "ScalingProblem: matrix must be square and non-empty");
  }
  if (!m_.allFinite() || m_.minCoeff() <= 0.0) {
    throw Error(ErrorKind::DomainError,
                "ScalingProblem: matrix must be entrywise positive");
  }
}

namespace {

Vector row_sums(const ScalingProblem& p, const PositiveVector& x) {
  if (x.dim() != p.size()) {
    throw Error(ErrorKind::DimMismatch, "scaling: vector length does not match matrix");
  }
  Vector r = p.matrix() * x.vec();
  if (r.minCoeff() <= 0.0) {
    throw Error(ErrorKind::DomainError, "scaling: non-positive row sum");
  }
  return r;
}

double eval_f(const PositiveVector& x) { return -x.vec().array().log().sum(); }

double eval_h(const ScalingProblem& p, const PositiveVector& x) {
  return -row_sums(p, x).array().log().sum();
}

}  // namespace

double scaling_objective(const ScalingProblem& p, const PositiveVector& x) {
  return eval_f(x) - eval_h(p, x);
}

Vector scaling_gradient_h(const ScalingProblem& p, const PositiveVector& x) {
  const Vector r = row_sums(p, x);
  // d/dx_j of -sum_i log r_i = -sum_i M_ij / r_i
  return -(p.matrix().transpose() * r.cwiseInverse());
}

PositiveVector scaling_oracle(const Vector& g, const PositiveVector& anchor) {
  if (g.size() != anchor.dim()) {
    throw Error(ErrorKind::DimMismatch, "scaling_oracle: gradient length mismatch");
  }
  if (!g.allFinite() || g.minCoeff() <= 0.0) {
    throw Error(ErrorKind::DomainError, "scaling_oracle: linear term must be positive");
  }
  return PositiveVector(g.cwiseInverse());
}

PositiveVector scaling_gauge(const PositiveVector& x) {
  const double mean_log = x.vec().array().log().mean();
  return PositiveVector(x.vec() * std::exp(-mean_log));
}

DcProblem<PositiveVector> make_scaling_dc(std::shared_ptr<const ScalingProblem> p) {
  DcProblem<PositiveVector> dc;
  dc.eval_f = [](const PositiveVector& x) { return eval_f(x); };
  dc.eval_h = [p](const PositiveVector& x) { return eval_h(*p, x); };
  dc.grad_h = [p](const PositiveVector& x) { return scaling_gradient_h(*p, x); };
  dc.oracle = [](const Vector& grad_h, const PositiveVector& anchor) {
    return scaling_oracle(-grad_h, anchor);
  };
  dc.gauge = scaling_gauge;
  return dc;
}

ScalingFactors assemble_scaling(const ScalingProblem& p, const PositiveVector& x) {
  return {row_sums(p, x).cwiseInverse(), x.vec()};
}

Matrix scaled_matrix(const ScalingProblem& p, const ScalingFactors& s) {
  return s.row.asDiagonal() * p.matrix() * s.col.asDiagonal();
}

ScalingResult solve_scaling(const ScalingProblem& p, const SolverConfig& cfg) {
  auto shared = std::make_shared<const ScalingProblem>(p);
  const auto dc = make_scaling_dc(shared);
  auto result = solve(dc, PositiveVector(Vector::Ones(p.size())), cfg);
  ScalingFactors factors = assemble_scaling(p, result.point);
  return {std::move(result.point), std::move(factors), std::move(result.trace)};
}

}  // namespace cccp
