#include "cccp/generate.hpp"

#include <Eigen/QR>
#include <cmath>

namespace cccp {

namespace {

Matrix gaussian(Eigen::Index r, Eigen::Index c, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Matrix g(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) g(i, j) = n01(rng);
  return g;
}

}  // namespace

Matrix random_orthogonal(Eigen::Index d, Rng& rng) {
  if (d < 1) throw Error(ErrorKind::DomainError, "random_orthogonal: d must be >= 1");
  Eigen::HouseholderQR<Matrix> qr(gaussian(d, d, rng));
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

SpdMatrix random_spd(Eigen::Index d, double cond, Rng& rng) {
  if (d < 1) throw Error(ErrorKind::DomainError, "random_spd: d must be >= 1");
  if (!(cond >= 1.0) || !std::isfinite(cond)) {
    throw Error(ErrorKind::DomainError, "random_spd: cond must be finite and >= 1");
  }
  const double a = 0.5 * std::log10(cond);
  std::uniform_real_distribution<double> u(-a, a);
  Vector lambda(d);
  for (Eigen::Index i = 0; i < d; ++i) lambda[i] = std::pow(10.0, u(rng));
  if (d >= 2) {
    lambda[0] = std::pow(10.0, -a);
    lambda[1] = std::pow(10.0, a);
  }
  const Matrix q = random_orthogonal(d, rng);
  return SpdMatrix::symmetrized(q * lambda.asDiagonal() * q.transpose());
}

Matrix random_positive_matrix(Eigen::Index n, Rng& rng, double spread) {
  if (n < 1 || !(spread >= 1.0)) {
    throw Error(ErrorKind::DomainError, "random_positive_matrix: need n >= 1, spread >= 1");
  }
  const double a = std::log(spread);
  std::uniform_real_distribution<double> u(-a, a);
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = std::exp(u(rng));
  return m;
}

Matrix elliptical_samples(Eigen::Index n, const SpdMatrix& scatter, Rng& rng, double dof) {
  if (n < 1 || !(dof > 0)) throw Error(ErrorKind::DomainError, "elliptical_samples: bad n or dof");
  const Eigen::Index d = scatter.dim();
  const Matrix root = matrix_sqrt(scatter).mat();
  std::chi_squared_distribution<double> chi(dof);
  Matrix z = gaussian(n, d, rng) * root;
  for (Eigen::Index i = 0; i < n; ++i) z.row(i) /= std::sqrt(chi(rng) / dof);
  return z;
}

BlDatum geometric_bl_datum(Eigen::Index d, Eigen::Index k, Rng& rng, int r) {
  if (k < 1 || d < 1 || d % k != 0 || r < 1) {
    throw Error(ErrorKind::DomainError, "geometric_bl_datum: need k | d and r >= 1");
  }
  std::vector<Matrix> maps;
  std::vector<double> weights;
  for (int j = 0; j < r; ++j) {
    const Matrix q = random_orthogonal(d, rng);
    for (Eigen::Index c = 0; c < d; c += k) {
      maps.push_back(q.middleCols(c, k));
      weights.push_back(1.0 / r);
    }
  }
  return BlDatum(std::move(maps), std::move(weights));
}

BlDatum coordinate_bl_datum(Eigen::Index d) {
  std::vector<Matrix> maps;
  for (Eigen::Index i = 0; i < d; ++i) maps.push_back(Matrix::Identity(d, d).col(i));
  return BlDatum(std::move(maps), std::vector<double>(static_cast<std::size_t>(d), 1.0));
}

BlDatum holder_bl_datum(Eigen::Index d, const std::vector<double>& weights) {
  std::vector<Matrix> maps(weights.size(), Matrix::Identity(d, d));
  return BlDatum(std::move(maps), weights);
}

std::vector<double> random_simplex_weights(std::size_t m, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(m);
  double s = 0.0;
  for (auto& v : w) s += (v = e(rng));
  for (auto& v : w) v /= s;
  // push the rounding residue into the largest weight so the sum is exact
  double t = 0.0;
  for (std::size_t i = 1; i < m; ++i) t += w[i];
  w[0] = 1.0 - t;
  return w;
}

}  // namespace cccp
