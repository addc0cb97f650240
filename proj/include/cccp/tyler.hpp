#pragma once

// Tyler's M-estimator of scatter, parametrized by the inverse scatter P.
//
//   phi(P) = -log det P + (2 beta / n) sum_i log(a_i^T P a_i)
//
// with beta = d/2 for Tyler's estimator (distance generating function
// t^{-beta}). f = -log det P and h = -(2 beta / n) sum_i log(a_i^T P a_i) are
// both convex, and the CCCP oracle is the classical fixed-point map
// P <- G^{-1}, G = (2 beta / n) sum_i a_i a_i^T / (a_i^T P_k a_i).
//
// The estimator is defined up to scale; P is normalized to tr(P) = d.

#include <memory>
#include <optional>

#include "cccp/dcsolver.hpp"

namespace cccp {

class TylerProblem {
 public:
  /// samples: n x d, one observation per row. Throws DomainError when n < d,
  /// a sample is zero, or beta <= 0.
  explicit TylerProblem(Matrix samples, std::optional<double> shape_exponent = {});

  const Matrix& samples() const noexcept { return a_; }
  Eigen::Index n() const noexcept { return a_.rows(); }
  Eigen::Index d() const noexcept { return a_.cols(); }
  double shape_exponent() const noexcept { return beta_; }
  /// 2 beta / n; equals d / n for Tyler.
  double coefficient() const noexcept { return 2.0 * beta_ / static_cast<double>(n()); }

 private:
  Matrix a_;
  double beta_;
};

double tyler_objective(const TylerProblem& p, const SpdMatrix& P);

/// Euclidean gradient of h: -(2 beta / n) sum_i a_i a_i^T / (a_i^T P a_i).
SymMatrix tyler_gradient_h(const TylerProblem& p, const SpdMatrix& P);

/// P = G^{-1}, trace-normalized, where G is the (negated) gradient of h at
/// the anchor. Throws SingularGradient when G is not positive definite.
SpdMatrix tyler_oracle(const SymMatrix& g, const SpdMatrix& anchor);

SpdMatrix trace_normalize(const SpdMatrix& x);

/// ||P (2 beta / n) sum_i a_i a_i^T / (a_i^T P a_i) - I||_F.
double tyler_fixed_point_residual(const TylerProblem& p, const SpdMatrix& P);

DcProblem<SpdMatrix> make_tyler_dc(std::shared_ptr<const TylerProblem> p);

/// Components h_i(P) = -2 beta log(a_i^T P a_i), m = n. The oracle does not
/// normalize the trace.
FiniteSumDcProblem<SpdMatrix> make_tyler_finite_sum(std::shared_ptr<const TylerProblem> p);

struct TylerResult {
  SpdMatrix precision;  // P, tr(P) = d
  SpdMatrix scatter;    // P^{-1}, tr = d
  IterateTrace trace;
};

/// Full CCCP from P = I.
TylerResult solve_tyler(const TylerProblem& p, const SolverConfig& cfg);
/// Incremental scheme from P = I; the output is trace-normalized.
TylerResult solve_tyler_incremental(const TylerProblem& p, const SolverConfig& cfg);

}  // namespace cccp
