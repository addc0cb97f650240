#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "cccp/generate.hpp"
#include "cccp/pdcore.hpp"

namespace cccp::testing {

inline Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d[i++] = x;
  return d.asDiagonal();
}

// Eigenvalues of A^{-1} B through Eigen's general (non-symmetric) solver, a
// route independent of the Cholesky reduction used by the library.
inline Vector oracle_generalized_eigs(const Matrix& a, const Matrix& b) {
  Eigen::EigenSolver<Matrix> es(a.inverse() * b);
  Vector out = es.eigenvalues().real();
  std::sort(out.data(), out.data() + out.size());
  return out;
}

inline double oracle_distance(const Matrix& a, const Matrix& b) {
  return std::sqrt(oracle_generalized_eigs(a, b).array().log().square().sum());
}

// Square root through Eigen's symmetric solver directly.
inline Matrix oracle_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

inline Matrix random_invertible(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> n01;
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n01(rng);
  return m + 0.5 * std::sqrt(static_cast<double>(d)) * Matrix::Identity(d, d);
}

inline Matrix random_symmetric(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> n01;
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n01(rng);
  return 0.5 * (m + m.transpose());
}

}  // namespace cccp::testing
