#include <gtest/gtest.h>

#include <numeric>

#include "cccp/sdiv.hpp"
#include "test_util.hpp"

using namespace cccp;
using namespace cccp::testing;

namespace {

// Unique root of sum_i w_i/(x + a_i) = 1/(2x) between min and max a_i.
double scalar_barycenter(const std::vector<double>& a, const std::vector<double>& w) {
  auto g = [&](double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] / (x + a[i]);
    return s - 0.5 / x;
  };
  double lo = *std::min_element(a.begin(), a.end()), hi = *std::max_element(a.begin(), a.end());
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double sdiv_by_hand(const Matrix& x, const Matrix& y) {
  return std::log((0.5 * (x + y)).determinant()) - 0.5 * std::log(x.determinant()) -
         0.5 * std::log(y.determinant());
}

}  // namespace

TEST(SDivergence, Examples) {
  Rng rng(1);
  const SpdMatrix x = random_spd(4, 10, rng);
  EXPECT_NEAR(s_divergence(x, x), 0.0, 1e-14);
  EXPECT_NEAR(s_divergence(SpdMatrix::identity(1), SpdMatrix(Matrix::Constant(1, 1, 4.0))),
              std::log(2.5) - 0.5 * std::log(4.0), 1e-15);
  for (int t = 0; t < 20; ++t) {
    const SpdMatrix a = random_spd(4, 100, rng), b = random_spd(4, 100, rng);
    const double v = s_divergence(a, b);
    EXPECT_NEAR(v, sdiv_by_hand(a.mat(), b.mat()), 1e-10);
    EXPECT_NEAR(v, s_divergence(b, a), 1e-12);
    EXPECT_GT(v, 0.0);
    const Matrix m = random_invertible(4, rng);
    EXPECT_NEAR(s_divergence(SpdMatrix::symmetrized(m.transpose() * a.mat() * m),
                             SpdMatrix::symmetrized(m.transpose() * b.mat() * m)),
                v, 1e-9);
  }
}

TEST(BarycenterProblem, Validation) {
  const SpdMatrix i2 = SpdMatrix::identity(2);
  EXPECT_THROW(BarycenterProblem({i2, i2}, {0.5, 0.6}), Error);
  EXPECT_THROW(BarycenterProblem({i2, i2}, {1.5, -0.5}), Error);
  EXPECT_THROW(BarycenterProblem({i2, SpdMatrix::identity(3)}, {0.5, 0.5}), Error);
  EXPECT_THROW(BarycenterProblem({i2}, {0.5, 0.5}), Error);
}

TEST(BarycenterObjective, IsWeightedDivergence) {
  Rng rng(2);
  const std::vector<SpdMatrix> atoms{random_spd(3, 10, rng), random_spd(3, 10, rng)};
  const BarycenterProblem p(atoms, {0.3, 0.7});
  const SpdMatrix x = random_spd(3, 10, rng);
  EXPECT_NEAR(barycenter_objective(p, x), 0.3 * sdiv_by_hand(x.mat(), atoms[0].mat()) +
                                              0.7 * sdiv_by_hand(x.mat(), atoms[1].mat()),
              1e-10);
}

TEST(BarycenterOracle, Examples) {
  Rng rng(3);
  const SpdMatrix a = random_spd(3, 10, rng);
  const auto equal = std::make_shared<const BarycenterProblem>(std::vector<SpdMatrix>{a, a},
                                                               std::vector<double>{0.5, 0.5});
  const auto dc = make_barycenter_dc(equal);
  EXPECT_LE((cccp_step(dc, a).mat() - a.mat()).norm(), 1e-12 * a.mat().norm());

  const SpdMatrix m = random_spd(4, 50, rng);
  const auto sq = std::make_shared<const BarycenterProblem>(square_root_problem(m));
  const SpdMatrix root = SpdMatrix::symmetrized(oracle_sqrt(m.mat()));
  EXPECT_LE((cccp_step(make_barycenter_dc(sq), root).mat() - root.mat()).norm(), 1e-10 * root.mat().norm());
  // the map written out: [(X + I)^{-1} + (X + M)^{-1}]^{-1}
  const SpdMatrix x = random_spd(4, 10, rng);
  const Matrix by_hand = ((x.mat() + Matrix::Identity(4, 4)).inverse() + (x.mat() + m.mat()).inverse()).inverse();
  EXPECT_LE((cccp_step(make_barycenter_dc(sq), x).mat() - by_hand).norm(), 1e-10 * by_hand.norm());
}

TEST(SqrtViaSdiv, Examples) {
  const SolverConfig cfg;
  EXPECT_LE((matrix_sqrt_via_sdiv(SpdMatrix::identity(3), cfg).mat() - Matrix::Identity(3, 3)).norm(), 1e-12);
  EXPECT_LE((matrix_sqrt_via_sdiv(SpdMatrix(diag({4, 9})), cfg).mat() - diag({2, 3})).norm(), 1e-8);
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    const SpdMatrix m = random_spd(20, 1e3, rng);
    const Matrix want = oracle_sqrt(m.mat());
    const auto r = sqrt_via_sdiv(m, cfg);
    EXPECT_LE((r.point.mat() - want).norm(), 1e-7 * want.norm());
    EXPECT_LE(r.trace.iterations(), 200u);
  }
}

TEST(Barycenter, SingleAtom) {
  Rng rng(5);
  const SpdMatrix a = random_spd(3, 10, rng);
  const auto r = barycenter(BarycenterProblem({a}, {1.0}), SolverConfig{});
  EXPECT_LE((r.point.mat() - a.mat()).norm(), 1e-10 * a.mat().norm());
}

TEST(Barycenter, DiagonalAtomsMatchScalarRoots) {
  Rng rng(6);
  std::uniform_real_distribution<double> u(0.1, 10);
  const int d = 4;
  std::vector<SpdMatrix> atoms;
  std::vector<std::vector<double>> entries(d);
  for (int i = 0; i < 3; ++i) {
    Vector v(d);
    for (int j = 0; j < d; ++j) entries[j].push_back(v[j] = u(rng));
    atoms.emplace_back(Matrix(v.asDiagonal()));
  }
  const std::vector<double> w{0.2, 0.3, 0.5};
  const auto r = barycenter(BarycenterProblem(atoms, w), SolverConfig{});
  for (int j = 0; j < d; ++j) {
    EXPECT_NEAR(r.point.mat()(j, j), scalar_barycenter(entries[j], w), 1e-8);
  }
}

TEST(Barycenter, PermutationEquivariantAndStationary) {
  Rng rng(7);
  const int d = 5;
  std::vector<SpdMatrix> atoms, permuted;
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix pm = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) pm(i, perm[i]) = 1.0;
  for (int i = 0; i < 4; ++i) {
    atoms.push_back(random_spd(d, 30, rng));
    permuted.push_back(SpdMatrix::symmetrized(pm.transpose() * atoms.back().mat() * pm));
  }
  const auto w = random_simplex_weights(4, rng);
  const BarycenterProblem p(atoms, w);
  const auto a = barycenter(p, SolverConfig{});
  const auto b = barycenter(BarycenterProblem(permuted, w), SolverConfig{});
  EXPECT_LE((pm.transpose() * a.point.mat() * pm - b.point.mat()).norm(), 1e-8);
  const Matrix xinv = a.point.mat().inverse();
  EXPECT_LE(barycenter_residual(p, a.point), 1e-8 * xinv.norm());
  const auto& rec = a.trace.records;
  for (std::size_t k = 1; k < rec.size(); ++k) {
    EXPECT_LE(rec[k].phi, rec[k - 1].phi + 1e-10 * std::max(1.0, std::abs(rec[k - 1].phi)));
  }
}
