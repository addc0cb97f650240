#pragma once

// Seeded random instances. Everything draws from std::mt19937_64, so a seed
// reproduces the same instance with the same standard library.

#include <cstdint>
#include <random>

#include "cccp/bl.hpp"
#include "cccp/pdcore.hpp"

namespace cccp {

using Rng = std::mt19937_64;

/// Haar-distributed orthogonal matrix (QR of a Gaussian, signs fixed).
Matrix random_orthogonal(Eigen::Index d, Rng& rng);

/// Q diag(lambda) Q^T with log10(lambda) uniform in [-a, a], a = log10(cond)/2.
/// For d >= 2 the two extreme eigenvalues are pinned to 10^{-a} and 10^{a},
/// so the condition number is exactly cond.
SpdMatrix random_spd(Eigen::Index d, double cond, Rng& rng);

/// n x n matrix with log-uniform entries in [1/spread, spread].
Matrix random_positive_matrix(Eigen::Index n, Rng& rng, double spread = 10.0);

/// n samples (rows) from a centred multivariate t with `dof` degrees of
/// freedom and scatter `scatter`.
Matrix elliptical_samples(Eigen::Index n, const SpdMatrix& scatter, Rng& rng, double dof = 3.0);

/// Geometric BL datum: r random orthonormal bases of R^d, each cut into
/// d/k column blocks of width k, all with weight 1/r. Sum_i w_i A_i A_i^T = I
/// and sum_i w_i k_i = d. Requires k | d.
BlDatum geometric_bl_datum(Eigen::Index d, Eigen::Index k, Rng& rng, int r = 2);

/// A_i = e_i in R^d, w_i = 1.
BlDatum coordinate_bl_datum(Eigen::Index d);

/// A_i = I_d with the given weights (Hölder-type datum).
BlDatum holder_bl_datum(Eigen::Index d, const std::vector<double>& weights);

/// Random positive weights summing to one.
std::vector<double> random_simplex_weights(std::size_t m, Rng& rng);

}  // namespace cccp
