#include <gtest/gtest.h>

#include <sstream>

#include "cccp/diagnostics.hpp"
#include "cccp/matrix_io.hpp"
#include "test_util.hpp"

using namespace cccp;
using namespace cccp::testing;

TEST(SpdMatrix, RejectsAsymmetryAndIndefinite) {
  Matrix a(2, 2);
  a << 1, 0.5, 0.4, 1;
  EXPECT_THROW(SpdMatrix{a}, Error);
  try {
    SpdMatrix{a};
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainError);
  }
  Matrix b(2, 2);
  b << 1, 2, 2, 1;
  try {
    SpdMatrix{b};
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CholeskyFailure);
  }
}

TEST(SpdMatrix, AveragesTinyAsymmetry) {
  Matrix a = diag({2, 3});
  a(0, 1) = 1e-14;
  const SpdMatrix x(a);
  EXPECT_EQ(x.mat()(0, 1), x.mat()(1, 0));
  EXPECT_DOUBLE_EQ(x.mat()(0, 1), 5e-15);
}

TEST(SpdMatrix, DimensionMismatchKinds) {
  EXPECT_THROW(SpdMatrix(Matrix::Identity(2, 3)), Error);
  const SpdMatrix a = SpdMatrix::identity(2), b = SpdMatrix::identity(3);
  try {
    riemannian_distance(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimMismatch);
  }
}

TEST(EigDecomp, ReconstructsAndIsOrthogonal) {
  Rng rng(5);
  for (int d : {1, 3, 8}) {
    const Matrix a = random_symmetric(d, rng);
    const EigDecomp e = eig_sym(a);
    EXPECT_LE((e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.transpose() - a).norm(),
              1e-10 * a.norm());
    EXPECT_LE((e.eigenvectors.transpose() * e.eigenvectors - Matrix::Identity(d, d)).norm(),
              1e-10 * std::sqrt(d));
    for (int i = 1; i < d; ++i) EXPECT_LE(e.eigenvalues[i - 1], e.eigenvalues[i]);
  }
}

TEST(Logdet, Examples) {
  EXPECT_EQ(logdet(SpdMatrix::identity(3)), 0.0);
  EXPECT_NEAR(logdet(SpdMatrix(diag({4, 9}))), std::log(36.0), 1e-15);
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const SpdMatrix a = random_spd(6, 1e3, rng);
    Eigen::EigenSolver<Matrix> es(a.mat());
    const double oracle = es.eigenvalues().real().array().log().sum();
    EXPECT_NEAR(logdet(a), oracle, 1e-10);
  }
}

TEST(Logdet, ProductOfCommuting) {
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = diag({u(rng), u(rng), u(rng)}), b = diag({u(rng), u(rng), u(rng)});
    EXPECT_NEAR(logdet(SpdMatrix(Matrix(a * b))), logdet(SpdMatrix(a)) + logdet(SpdMatrix(b)), 1e-10);
  }
}

TEST(MatrixFunctions, Examples) {
  EXPECT_LE((matrix_sqrt(SpdMatrix(diag({4, 9}))).mat() - diag({2, 3})).norm(), 1e-15);
  EXPECT_LE(matrix_log(SpdMatrix::identity(4)).mat().norm(), 1e-15);
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const SpdMatrix a = random_spd(7, 1e4, rng);
    const Matrix round = matrix_exp(matrix_log(a)).mat();
    EXPECT_LE((round - a.mat()).norm(), 1e-9 * a.mat().norm());
    const Matrix r = matrix_sqrt(a).mat();
    EXPECT_LE((r * r - a.mat()).norm(), 1e-9 * a.mat().norm());
    // sqrt of sqrt, squared twice
    const Matrix q = matrix_sqrt(matrix_sqrt(a)).mat();
    EXPECT_LE((q * q * q * q - a.mat()).norm(), 1e-8 * a.mat().norm());
    EXPECT_LE((matrix_power(a, 0.5).mat() - r).norm(), 1e-10 * r.norm());
    EXPECT_LE((matrix_inv_sqrt(a).mat() * r - Matrix::Identity(7, 7)).norm(), 1e-8);
  }
}

TEST(Distances, Examples) {
  const SpdMatrix i2 = SpdMatrix::identity(2);
  const SpdMatrix e = SpdMatrix(diag({std::exp(2.0), std::exp(3.0)}));
  EXPECT_NEAR(riemannian_distance(i2, e), std::sqrt(13.0), 1e-14);
  EXPECT_NEAR(thompson_distance(i2, e), 3.0, 1e-14);
  EXPECT_NEAR(riemannian_distance(e, e), 0.0, 1e-14);
  EXPECT_NEAR(thompson_distance(e, SpdMatrix(Matrix(0.25 * e.mat()))), std::log(4.0), 1e-14);
}

TEST(Distances, MatchGeneralizedEigenOracle) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const SpdMatrix a = random_spd(5, 1e3, rng), b = random_spd(5, 1e3, rng);
    const Vector lam = oracle_generalized_eigs(a.mat(), b.mat());
    EXPECT_NEAR(riemannian_distance(a, b), std::sqrt(lam.array().log().square().sum()), 1e-9);
    EXPECT_NEAR(thompson_distance(a, b), lam.array().log().abs().maxCoeff(), 1e-9);
    EXPECT_NEAR(riemannian_distance(a, b), riemannian_distance(b, a), 1e-10);
  }
}

TEST(Distances, ThompsonBelowRiemannianAndCongruenceInvariant) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 9;
    const SpdMatrix a = random_spd(d, 1e4, rng), b = random_spd(d, 1e4, rng);
    const double dr = riemannian_distance(a, b);
    EXPECT_LT(thompson_distance(a, b), dr);
    const Matrix m = random_invertible(d, rng);
    const SpdMatrix ma = SpdMatrix::symmetrized(m.transpose() * a.mat() * m);
    const SpdMatrix mb = SpdMatrix::symmetrized(m.transpose() * b.mat() * m);
    EXPECT_LE(std::abs(riemannian_distance(ma, mb) - dr), 1e-7 * dr);
  }
}

TEST(Distances, PositiveVector) {
  Vector a(2), b(2);
  a << 1, 1;
  b << std::exp(1.0), std::exp(-2.0);
  EXPECT_NEAR(riemannian_distance(PositiveVector(a), PositiveVector(b)), std::sqrt(5.0), 1e-14);
  EXPECT_THROW(PositiveVector(Vector::Zero(2)), Error);
}

TEST(Geodesic, EndpointsMidpointAndAdditivity) {
  const SpdMatrix i2 = SpdMatrix::identity(2), y = SpdMatrix(diag({4, 16}));
  EXPECT_LE((geodesic(i2, y, 0.5).mat() - diag({2, 4})).norm(), 1e-14);
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    const SpdMatrix a = random_spd(4, 1e2, rng), b = random_spd(4, 1e2, rng);
    EXPECT_LE((geodesic(a, b, 0.0).mat() - a.mat()).norm(), 1e-10 * a.mat().norm());
    EXPECT_LE((geodesic(a, b, 1.0).mat() - b.mat()).norm(), 1e-10 * b.mat().norm());
    const double dab = oracle_distance(a.mat(), b.mat());
    for (double s : {0.25, 0.5, 0.8}) {
      EXPECT_NEAR(oracle_distance(a.mat(), geodesic(a, b, s).mat()), s * dab, 1e-8);
    }
  }
  try {
    geodesic(i2, y, 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainError);
  }
}

TEST(MetricRelation, Probe) {
  const SpdMatrix i2 = SpdMatrix::identity(2);
  EXPECT_EQ(metric_relation_gap(i2, i2), 0.0);
  // I vs 1.1 I: d = sqrt(2) log 1.1, ||x - y||^2 = 0.02
  const SpdMatrix y(Matrix(1.1 * Matrix::Identity(2, 2)));
  const double d = std::sqrt(2.0) * std::log(1.1);
  const double expected = std::sqrt(2.0) * (1 - std::exp(-d)) * 1.1 * std::sqrt(2.0) - 0.02;
  EXPECT_NEAR(metric_relation_gap(i2, y), expected, 1e-14);
  EXPECT_GT(metric_relation_gap(i2, y), 0.0);
}

TEST(Warnings, IllConditionedLogdetWarns) {
  std::vector<std::string> seen;
  auto prev = set_warning_handler([&](std::string_view m) { seen.emplace_back(m); });
  logdet(SpdMatrix(diag({1e-8, 1e8})));
  set_warning_handler(prev);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_NE(seen[0].find("condition"), std::string::npos);
}

TEST(MatrixIo, RoundTripIsExact) {
  Rng rng(8);
  const SpdMatrix a = random_spd(5, 1e3, rng);
  std::stringstream ss;
  write_matrix(ss, a.mat());
  const Matrix back = read_matrix(ss);
  EXPECT_EQ((back - a.mat()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(MatrixIo, Errors) {
  std::stringstream bad("2\n1 2\n3\n");
  try {
    read_matrix(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
  EXPECT_THROW(read_matrix_file("/nonexistent/file.txt"), Error);
  std::stringstream rows("1 2 3\n4 5 6\n");
  const Matrix r = read_rows(rows);
  EXPECT_EQ(r.rows(), 2);
  EXPECT_EQ(r.cols(), 3);
  EXPECT_EQ(r(1, 2), 6.0);
}

TEST(MatrixIo, ReadSpdAveragesSymmetricPart) {
  std::stringstream ss("2\n2 1e-13\n0 2\n");
  const SpdMatrix x = read_spd(ss);
  EXPECT_EQ(x.mat()(0, 1), x.mat()(1, 0));
}
