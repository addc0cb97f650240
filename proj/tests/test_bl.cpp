#include <gtest/gtest.h>

#include <sstream>

#include "cccp/bl.hpp"
#include "cccp/diagnostics.hpp"
#include "test_util.hpp"

using namespace cccp;
using namespace cccp::testing;

TEST(BlDatum, Validation) {
  Matrix low(3, 2);
  low << 1, 2, 2, 4, 3, 6;  // rank one
  try {
    BlDatum({low, Matrix::Identity(3, 3)}, {0.5, 0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankDeficiency);
  }
  EXPECT_THROW(BlDatum({Matrix::Identity(2, 2)}, {-1.0}), Error);
  EXPECT_THROW(BlDatum({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}, {0.5, 0.5}), Error);
  // neither sum w = 1 nor sum w k = d
  EXPECT_THROW(BlDatum({Matrix::Identity(2, 2)}, {0.3}), Error);
  // sum w = 1 but sum w k != d: accepted with a warning
  std::vector<std::string> seen;
  auto prev = set_warning_handler([&](std::string_view m) { seen.emplace_back(m); });
  const BlDatum loose({Matrix::Identity(2, 2).col(0), Matrix::Identity(2, 2).col(1)}, {0.5, 0.5});
  set_warning_handler(prev);
  EXPECT_EQ(seen.size(), 1u);
  EXPECT_FALSE(loose.scale_invariant());
  EXPECT_TRUE(coordinate_bl_datum(3).scale_invariant());
}

TEST(BlObjective, Examples) {
  Rng rng(1);
  const BlDatum holder = holder_bl_datum(3, {0.5, 0.25, 0.25});
  for (int t = 0; t < 5; ++t) EXPECT_EQ(bl_objective(holder, random_spd(3, 100, rng)), 0.0);
  // coordinate datum: Hadamard gap
  const BlDatum coord = coordinate_bl_datum(2);
  for (int t = 0; t < 20; ++t) {
    const SpdMatrix x = random_spd(2, 100, rng);
    const double hadamard = std::log(x.mat()(0, 0) * x.mat()(1, 1) / x.mat().determinant());
    EXPECT_NEAR(bl_objective(coord, x), hadamard, 1e-10);
    EXPECT_GE(bl_objective(coord, x), -1e-12);
  }
  const BlDatum geo = geometric_bl_datum(8, 2, rng);
  EXPECT_NEAR(bl_objective(geo, SpdMatrix::identity(8)), 0.0, 1e-12);
}

TEST(BlObjective, ScaleInvariantUnderNormalization) {
  Rng rng(2);
  const BlDatum geo = geometric_bl_datum(6, 3, rng);
  const SpdMatrix x = random_spd(6, 10, rng);
  EXPECT_NEAR(bl_objective(geo, SpdMatrix(Matrix(7.0 * x.mat()))), bl_objective(geo, x), 1e-10);
}

TEST(BlSurrogate, AnchoringMajorizationBregman) {
  Rng rng(3);
  const BlDatum geo = geometric_bl_datum(4, 2, rng);
  for (int t = 0; t < 1000; ++t) {
    const SpdMatrix x = random_spd(4, 100, rng), z = random_spd(4, 100, rng);
    EXPECT_GE(bl_surrogate_bound(geo, x, z) - bl_objective(geo, x), -1e-10);
    if (t < 10) EXPECT_NEAR(bl_surrogate_bound(geo, z, z), bl_objective(geo, z), 1e-10);
  }
  const BlDatum holder = holder_bl_datum(3, {0.5, 0.5});
  for (int t = 0; t < 10; ++t) {
    const SpdMatrix x = random_spd(3, 10, rng), z = random_spd(3, 10, rng);
    const double bregman = (z.mat().inverse() * x.mat()).trace() - 3 - (logdet(x) - logdet(z));
    EXPECT_NEAR(bl_surrogate_bound(holder, x, z) - bl_objective(holder, x), bregman, 1e-10);
  }
}

TEST(BlOracle, Examples) {
  Rng rng(4);
  const BlDatum holder = holder_bl_datum(3, {0.5, 0.5});
  const SpdMatrix x = random_spd(3, 10, rng);
  EXPECT_LE((bl_map(holder, x).mat() - x.mat()).norm(), 1e-12 * x.mat().norm());
  // coordinate datum: map is diag(X11, X22)
  Matrix a(2, 2);
  a << 1, 0.3, 0.3, 1;
  EXPECT_LE((bl_map(coordinate_bl_datum(2), SpdMatrix(a)).mat() - Matrix::Identity(2, 2)).norm(), 1e-15);
  const BlDatum geo = geometric_bl_datum(8, 4, rng);
  EXPECT_LE((bl_map(geo, SpdMatrix::identity(8)).mat() - Matrix::Identity(8, 8)).norm(), 1e-12);
  // the map written out
  Matrix agg = Matrix::Zero(8, 8);
  const SpdMatrix y = random_spd(8, 10, rng);
  for (std::size_t i = 0; i < geo.maps().size(); ++i) {
    const Matrix& ai = geo.maps()[i];
    agg += geo.weights()[i] * ai * (ai.transpose() * y.mat() * ai).inverse() * ai.transpose();
  }
  EXPECT_LE((bl_map(geo, y).mat() - agg.inverse()).norm(), 1e-10 * agg.inverse().norm());
}

TEST(BlOracle, SingularAggregate) {
  // both maps see only e1; weights satisfy sum w k = d
  const BlDatum bad({Matrix::Identity(2, 2).col(0), Matrix::Identity(2, 2).col(0)}, {1.0, 1.0});
  try {
    bl_constant(bad, SolverConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularAggregate);
  }
}

TEST(BlConstant, HolderImmediate) {
  Rng rng(5);
  const auto r = bl_constant(holder_bl_datum(4, {0.5, 0.5}), SolverConfig{}, random_spd(4, 100, rng));
  EXPECT_EQ(r.f_star, 0.0);
  EXPECT_LE(r.trace.iterations(), 1u);
}

TEST(BlConstant, CoordinateDatum) {
  Rng rng(6);
  const auto r = bl_constant(coordinate_bl_datum(2), SolverConfig{}, random_spd(2, 10, rng));
  EXPECT_NEAR(r.f_star, 0.0, 1e-8);
  EXPECT_LE(std::abs(r.x_star.mat()(0, 1)), 1e-8);
}

TEST(BlConstant, GeometricData) {
  // three frames so the optimum is unique up to scale; with two
  // complementary half-dimensional frames it is not
  Rng rng(7);
  for (int t = 0; t < 5; ++t) {
    const int d = 4 + 2 * t;
    const BlDatum geo = geometric_bl_datum(d, d / 2, rng, 3);
    const auto r = bl_constant(geo, SolverConfig{}, random_spd(d, 10, rng));
    EXPECT_NEAR(r.f_star, 0.0, 1e-8);
    EXPECT_LE((r.x_star.mat() - Matrix::Identity(d, d)).norm(), 1e-6);
    const auto two = bl_constant(geometric_bl_datum(d, d / 2, rng), SolverConfig{}, random_spd(d, 10, rng));
    EXPECT_NEAR(two.f_star, 0.0, 1e-8);
    EXPECT_NEAR(r.x_star.mat().norm(), std::sqrt(d), 1e-12);
    EXPECT_LE(bl_stationarity_residual(geo, r.x_star), 1e-8);
    const auto& rec = r.trace.records;
    for (std::size_t k = 1; k < rec.size(); ++k) EXPECT_LE(rec[k].phi, rec[k - 1].phi + 1e-10);
  }
}

TEST(BlConstant, InfeasibleDatumDiverges) {
  // V = span(e2) violates dim V <= sum w_i dim(A_i^T V)
  Vector v(2);
  v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const BlDatum bad({Matrix::Identity(2, 2).col(0), v}, {1.5, 0.5});
  SolverConfig cfg;
  cfg.max_iters = 100000;
  try {
    bl_constant(bad, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivergenceDetected);
  }
}

TEST(BlDatumIo, RoundTrip) {
  Rng rng(8);
  const BlDatum geo = geometric_bl_datum(4, 2, rng);
  std::stringstream ss;
  write_bl_datum(ss, geo);
  const BlDatum back = read_bl_datum(ss);
  ASSERT_EQ(back.maps().size(), geo.maps().size());
  for (std::size_t i = 0; i < geo.maps().size(); ++i) {
    EXPECT_EQ((back.maps()[i] - geo.maps()[i]).norm(), 0.0);
    EXPECT_EQ(back.weights()[i], geo.weights()[i]);
  }
  std::stringstream bad("2\n1 0.5\n1\n");
  EXPECT_THROW(read_bl_datum(bad), Error);
}
