#pragma once

// S-divergence geometry: delta_s(X, Y) = logdet((X+Y)/2) - logdet(X)/2 -
// logdet(Y)/2, weighted barycenters min_X sum_i w_i delta_s(X, A_i), and the
// matrix square root as the barycenter of {I, M} with equal weights.
//
// Split: f(X) = -(1/2) logdet X + const, h(X) = -sum_i w_i logdet(X + A_i).
// Surrogate stationarity gives X <- (1/2) [sum_i w_i (X_k + A_i)^{-1}]^{-1};
// for the square root this is X <- [(X + I)^{-1} + (X + M)^{-1}]^{-1}, whose
// fixed point is M^{1/2}.

#include <memory>
#include <optional>
#include <vector>

#include "cccp/dcsolver.hpp"

namespace cccp {

double s_divergence(const SpdMatrix& x, const SpdMatrix& y);

class BarycenterProblem {
 public:
  /// Throws DimMismatch for mixed dimensions or count mismatch, DomainError
  /// for negative weights or |sum w - 1| > 1e-12.
  BarycenterProblem(std::vector<SpdMatrix> atoms, std::vector<double> weights);

  const std::vector<SpdMatrix>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  Eigen::Index dim() const noexcept { return atoms_.front().dim(); }

 private:
  std::vector<SpdMatrix> atoms_;
  std::vector<double> weights_;
};

/// Atoms {I, M}, weights (1/2, 1/2).
BarycenterProblem square_root_problem(const SpdMatrix& m);

/// sum_i w_i delta_s(X, A_i).
double barycenter_objective(const BarycenterProblem& p, const SpdMatrix& x);
/// Euclidean gradient of the objective (used by the gradient baseline).
SymMatrix barycenter_euclidean_gradient(const BarycenterProblem& p, const SpdMatrix& x);
/// Euclidean gradient of h: -sum_i w_i (X + A_i)^{-1}.
SymMatrix barycenter_gradient_h(const BarycenterProblem& p, const SpdMatrix& x);

/// (1/2) g^{-1} with g = sum_i w_i (X_k + A_i)^{-1} the negated gradient of h.
SpdMatrix barycenter_oracle(const SymMatrix& g, const SpdMatrix& anchor);

/// ||2 sum_i w_i (X + A_i)^{-1} - X^{-1}||_F.
double barycenter_residual(const BarycenterProblem& p, const SpdMatrix& x);

DcProblem<SpdMatrix> make_barycenter_dc(std::shared_ptr<const BarycenterProblem> p);

/// Starts from the weighted arithmetic mean unless `start` is given.
SolveResult<SpdMatrix> barycenter(const BarycenterProblem& p, const SolverConfig& cfg,
                                  const std::optional<SpdMatrix>& start = {});

/// Square root through the CCCP map. M is first scaled by
/// c = 1/sqrt(lambda_min lambda_max) so its spectrum is centred on 1, the map
/// is iterated from I, and the result is rescaled by 1/sqrt(c).
SolveResult<SpdMatrix> sqrt_via_sdiv(const SpdMatrix& m, const SolverConfig& cfg);
SpdMatrix matrix_sqrt_via_sdiv(const SpdMatrix& m, const SolverConfig& cfg);

}  // namespace cccp
