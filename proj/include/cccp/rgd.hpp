#pragma once

// Riemannian gradient descent on the PD manifold with the affine-invariant
// metric <A, B>_X = tr(X^{-1} A X^{-1} B). Used as the baseline against CCCP.

#include <functional>

#include "cccp/dcsolver.hpp"

namespace cccp {

/// A smooth objective with its Euclidean gradient.
struct SmoothProblem {
  std::function<double(const SpdMatrix&)> value;
  std::function<SymMatrix(const SpdMatrix&)> euclidean_gradient;
};

struct RgdConfig {
  double step_size = 0.1;
  bool use_backtracking = true;
  double backtrack_shrink = 0.5;
  double armijo_c = 1e-4;
  int max_iters = 10000;
  double tol = 1e-10;  // on the Riemannian gradient norm
  bool record_trace = true;

  void validate() const;
};

/// X sym(grad) X.
SymMatrix riemannian_gradient(const SmoothProblem& p, const SpdMatrix& x);
SymMatrix riemannian_gradient(const SpdMatrix& x, const SymMatrix& euclidean_grad);

/// <U, V>_X and ||V||_X.
double riemannian_inner(const SpdMatrix& x, const SymMatrix& u, const SymMatrix& v);
double riemannian_norm(const SpdMatrix& x, const SymMatrix& v);

/// X^{1/2} expm(X^{-1/2} V X^{-1/2}) X^{1/2}.
SpdMatrix exp_map(const SpdMatrix& x, const SymMatrix& v);
/// X^{1/2} logm(X^{-1/2} Y X^{-1/2}) X^{1/2}, the inverse of exp_map.
SymMatrix log_map(const SpdMatrix& x, const SpdMatrix& y);

/// X_{k+1} = Exp_{X_k}(-eta grad phi(X_k)), fixed eta or Armijo backtracking
/// from cfg.step_size each iteration. The trace counts one oracle call per
/// gradient evaluation. Throws SolverError(StepFailure) if backtracking
/// shrinks eta below 1e-16 or a fixed step leaves the manifold. Stops with
/// reason "stalled" when the Armijo decrease drops below rounding in phi.
SolveResult<SpdMatrix> rgd_solve(const SmoothProblem& p, const SpdMatrix& x0,
                                 const RgdConfig& cfg);

}  // namespace cccp
