#pragma once

// Matrix scaling to doubly stochastic form. For an entrywise positive M,
// minimizing
//
//   phi(x) = -sum_j log x_j + sum_i log(sum_j x_j M_ij)
//
// over x > 0 with f = -sum log x_j and h = -sum_i log((M x)_i) gives a CCCP
// whose closed-form oracle is the Sinkhorn column update x_j = 1 / g_j.

#include <memory>

#include "cccp/dcsolver.hpp"

namespace cccp {

class ScalingProblem {
 public:
  /// Throws DimMismatch for non-square M, DomainError for non-positive or
  /// non-finite entries.
  explicit ScalingProblem(Matrix m);

  const Matrix& matrix() const noexcept { return m_; }
  Eigen::Index size() const noexcept { return m_.rows(); }

 private:
  Matrix m_;
};

double scaling_objective(const ScalingProblem& p, const PositiveVector& x);

/// Euclidean gradient of h(x) = -sum_i log((M x)_i).
Vector scaling_gradient_h(const ScalingProblem& p, const PositiveVector& x);

/// argmin_{x > 0} -sum log x_j + <g, x>, i.e. x_j = 1 / g_j. Requires g > 0.
PositiveVector scaling_oracle(const Vector& g, const PositiveVector& anchor);

/// Scale so that prod_j x_j = 1; phi is invariant under x -> c x.
PositiveVector scaling_gauge(const PositiveVector& x);

DcProblem<PositiveVector> make_scaling_dc(std::shared_ptr<const ScalingProblem> p);

/// D = diag(row), E = diag(col).
struct ScalingFactors {
  Vector row;
  Vector col;
};

/// E = diag(x), D_i = 1 / sum_j x_j M_ij. Rows of D M E sum to one exactly;
/// columns sum to one at a stationary x.
ScalingFactors assemble_scaling(const ScalingProblem& p, const PositiveVector& x);
Matrix scaled_matrix(const ScalingProblem& p, const ScalingFactors& s);

struct ScalingResult {
  PositiveVector x;
  ScalingFactors factors;
  IterateTrace trace;
};

/// Runs CCCP from x = 1.
ScalingResult solve_scaling(const ScalingProblem& p, const SolverConfig& cfg);

}  // namespace cccp
