#pragma once

// Brascamp-Lieb objective over PD matrices:
//
//   F(X) = -logdet X + sum_i w_i logdet(A_i^T X A_i),   A_i in R^{d x k_i}.
//
// f = -logdet X, h = -sum_i w_i logdet(A_i^T X A_i). The CCCP oracle is
//
//   X_{k+1} = [sum_i w_i A_i (A_i^T X_k A_i)^{-1} A_i^T]^{-1}.
//
// F is invariant under X -> cX exactly when sum_i w_i k_i = d; such data get
// a Frobenius gauge ||X||_F = sqrt(d) after every step.

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "cccp/dcsolver.hpp"

namespace cccp {

class BlDatum {
 public:
  /// Throws DimMismatch (row counts differ, count mismatch), RankDeficiency
  /// (some A_i lacks full column rank) or DomainError (negative weight,
  /// neither sum w_i k_i = d nor sum w_i = 1). Warns when only sum w_i = 1.
  BlDatum(std::vector<Matrix> maps, std::vector<double> weights);

  const std::vector<Matrix>& maps() const noexcept { return maps_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  Eigen::Index dim() const noexcept { return maps_.front().rows(); }
  /// sum_i w_i k_i == d (to 1e-12 relative).
  bool scale_invariant() const noexcept { return scale_invariant_; }

 private:
  std::vector<Matrix> maps_;
  std::vector<double> weights_;
  bool scale_invariant_ = false;
};

double bl_objective(const BlDatum& datum, const SpdMatrix& x);

/// g(X, Z) = -logdet X + sum_i w_i [logdet Phi_i(Z) + tr(Phi_i(Z)^{-1} Phi_i(X)) - k_i]
/// with Phi_i(X) = A_i^T X A_i. Majorizes F and touches it at X = Z.
double bl_surrogate_bound(const BlDatum& datum, const SpdMatrix& x, const SpdMatrix& z);

/// Euclidean gradient of h: -sum_i w_i A_i Phi_i(X)^{-1} A_i^T.
SymMatrix bl_gradient_h(const BlDatum& datum, const SpdMatrix& x);
/// Euclidean gradient of F.
SymMatrix bl_euclidean_gradient(const BlDatum& datum, const SpdMatrix& x);

/// g^{-1}, g = sum_i w_i A_i Phi_i(X_k)^{-1} A_i^T. Throws SingularAggregate
/// when g is singular.
SpdMatrix bl_oracle(const SymMatrix& g, const SpdMatrix& anchor);

/// The raw fixed-point map X -> bl_oracle(-grad h(X), X), no gauge.
SpdMatrix bl_map(const BlDatum& datum, const SpdMatrix& x);

/// ||X - bl_map(X)||_F / ||X||_F.
double bl_stationarity_residual(const BlDatum& datum, const SpdMatrix& x);

/// X * sqrt(d) / ||X||_F.
SpdMatrix frobenius_normalize(const SpdMatrix& x);

DcProblem<SpdMatrix> make_bl_dc(std::shared_ptr<const BlDatum> datum);

struct BlResult {
  double f_star;
  SpdMatrix x_star;  // Frobenius-normalized when the datum is scale invariant
  IterateTrace trace;
};

/// CCCP from `start` (default I). Throws SolverError(DivergenceDetected) once
/// an iterate's condition number exceeds 1e12.
BlResult bl_constant(const BlDatum& datum, const SolverConfig& cfg,
                     const std::optional<SpdMatrix>& start = {});

/// Datum text format: `d`, then per map a line `k_i w_i` followed by d rows
/// of k_i numbers. Maps are read until end of input.
BlDatum read_bl_datum(std::istream& in);
BlDatum read_bl_datum_file(const std::filesystem::path& path);
void write_bl_datum(std::ostream& out, const BlDatum& datum);

}  // namespace cccp
