#include "cccp/sdiv.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace cccp {

namespace {

const double kLog2 = std::log(2.0);

void require_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) throw Error(ErrorKind::DimMismatch, std::string(what) + ": dimension mismatch");
}

SpdMatrix sum_of(const SpdMatrix& x, const SpdMatrix& a) {
  return SpdMatrix::symmetrized(x.mat() + a.mat());
}

}  // namespace

double s_divergence(const SpdMatrix& x, const SpdMatrix& y) {
  require_dim(x.dim(), y.dim(), "s_divergence");
  const double d = static_cast<double>(x.dim());
  return logdet(sum_of(x, y)) - d * kLog2 - 0.5 * logdet(x) - 0.5 * logdet(y);
}

BarycenterProblem::BarycenterProblem(std::vector<SpdMatrix> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty() || atoms_.size() != weights_.size()) {
    throw Error(ErrorKind::DimMismatch,
                "BarycenterProblem: need one weight per atom and at least one atom");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    require_dim(atoms_[i].dim(), atoms_.front().dim(), "BarycenterProblem");
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
      throw Error(ErrorKind::DomainError, "BarycenterProblem: weights must be nonnegative");
    }
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::DomainError, "BarycenterProblem: weights must sum to 1");
  }
}

BarycenterProblem square_root_problem(const SpdMatrix& m) {
  return BarycenterProblem({SpdMatrix::identity(m.dim()), m}, {0.5, 0.5});
}

namespace {

// The X-independent part of f: -sum_i w_i (logdet(A_i)/2) - d log 2.
double f_constant(const BarycenterProblem& p) {
  double c = 0.0;
  for (std::size_t i = 0; i < p.atoms().size(); ++i) {
    c -= 0.5 * p.weights()[i] * logdet(p.atoms()[i]);
  }
  return c - static_cast<double>(p.dim()) * kLog2;
}

double weight_sum(const BarycenterProblem& p) {
  double s = 0.0;
  for (double w : p.weights()) s += w;
  return s;
}

double eval_h(const BarycenterProblem& p, const SpdMatrix& x) {
  require_dim(x.dim(), p.dim(), "barycenter");
  double s = 0.0;
  for (std::size_t i = 0; i < p.atoms().size(); ++i) {
    if (p.weights()[i] == 0.0) continue;
    s -= p.weights()[i] * logdet(sum_of(x, p.atoms()[i]));
  }
  return s;
}

// sum_i w_i (X + A_i)^{-1}
Matrix weighted_inverse_sum(const BarycenterProblem& p, const SpdMatrix& x) {
  require_dim(x.dim(), p.dim(), "barycenter");
  const Eigen::Index d = p.dim();
  Matrix s = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < p.atoms().size(); ++i) {
    if (p.weights()[i] == 0.0) continue;
    s += p.weights()[i] * sum_of(x, p.atoms()[i]).solve(Matrix::Identity(d, d));
  }
  return s;
}

}  // namespace

double barycenter_objective(const BarycenterProblem& p, const SpdMatrix& x) {
  const double f = -0.5 * weight_sum(p) * logdet(x) + f_constant(p);
  return f - eval_h(p, x);
}

SymMatrix barycenter_gradient_h(const BarycenterProblem& p, const SpdMatrix& x) {
  return SymMatrix::symmetrized(-weighted_inverse_sum(p, x));
}

SymMatrix barycenter_euclidean_gradient(const BarycenterProblem& p, const SpdMatrix& x) {
  const Eigen::Index d = p.dim();
  return SymMatrix::symmetrized(weighted_inverse_sum(p, x) -
                                0.5 * weight_sum(p) * x.solve(Matrix::Identity(d, d)));
}

SpdMatrix barycenter_oracle(const SymMatrix& g, const SpdMatrix& anchor) {
  require_dim(g.dim(), anchor.dim(), "barycenter_oracle");
  return SpdMatrix::symmetrized(0.5 * inverse(SpdMatrix(g)).mat());
}

double barycenter_residual(const BarycenterProblem& p, const SpdMatrix& x) {
  const Eigen::Index d = p.dim();
  return (2.0 * weighted_inverse_sum(p, x) - x.solve(Matrix::Identity(d, d))).norm();
}

DcProblem<SpdMatrix> make_barycenter_dc(std::shared_ptr<const BarycenterProblem> p) {
  const double c = f_constant(*p);
  const double wsum = weight_sum(*p);
  DcProblem<SpdMatrix> dc;
  dc.eval_f = [c, wsum](const SpdMatrix& x) { return -0.5 * wsum * logdet(x) + c; };
  dc.eval_h = [p](const SpdMatrix& x) { return eval_h(*p, x); };
  dc.grad_h = [p](const SpdMatrix& x) { return barycenter_gradient_h(*p, x); };
  dc.oracle = [](const SymMatrix& grad_h, const SpdMatrix& anchor) {
    return barycenter_oracle(SymMatrix::symmetrized(-grad_h.mat()), anchor);
  };
  return dc;
}

SolveResult<SpdMatrix> barycenter(const BarycenterProblem& p, const SolverConfig& cfg,
                                  const std::optional<SpdMatrix>& start) {
  auto shared = std::make_shared<const BarycenterProblem>(p);
  SpdMatrix x0 = [&] {
    if (start) return *start;
    Matrix mean = Matrix::Zero(p.dim(), p.dim());
    for (std::size_t i = 0; i < p.atoms().size(); ++i) {
      mean += p.weights()[i] * p.atoms()[i].mat();
    }
    return SpdMatrix::symmetrized(mean);
  }();
  return solve(make_barycenter_dc(shared), x0, cfg);
}

SolveResult<SpdMatrix> sqrt_via_sdiv(const SpdMatrix& m, const SolverConfig& cfg) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.mat(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::EigFailure, "sqrt_via_sdiv: eigenvalue solve failed");
  }
  const double c = 1.0 / std::sqrt(es.eigenvalues().minCoeff() * es.eigenvalues().maxCoeff());
  const SpdMatrix centred = SpdMatrix::symmetrized(c * m.mat());
  auto result = barycenter(square_root_problem(centred), cfg, SpdMatrix::identity(m.dim()));
  return {SpdMatrix::symmetrized(result.point.mat() / std::sqrt(c)), std::move(result.trace)};
}

SpdMatrix matrix_sqrt_via_sdiv(const SpdMatrix& m, const SolverConfig& cfg) {
  return sqrt_via_sdiv(m, cfg).point;
}

}  // namespace cccp
