#include "cccp/bl.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cccp/diagnostics.hpp"
#include "cccp/matrix_io.hpp"

namespace cccp {

namespace {

constexpr double kDivergenceCondition = 1e12;

void require_dim(const BlDatum& datum, const SpdMatrix& x) {
  if (x.dim() != datum.dim()) {
    throw Error(ErrorKind::DimMismatch, "bl: matrix dimension does not match datum");
  }
}

SpdMatrix congruence(const Matrix& a, const SpdMatrix& x) {
  return SpdMatrix::symmetrized(a.transpose() * x.mat() * a);
}

}  // namespace

BlDatum::BlDatum(std::vector<Matrix> maps, std::vector<double> weights)
    : maps_(std::move(maps)), weights_(std::move(weights)) {
  if (maps_.empty() || maps_.size() != weights_.size()) {
    throw Error(ErrorKind::DimMismatch, "BlDatum: need one weight per map and at least one map");
  }
  const Eigen::Index d = maps_.front().rows();
  if (d == 0) throw Error(ErrorKind::DimMismatch, "BlDatum: empty map");
  double wsum = 0.0;
  double wk = 0.0;
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const Matrix& a = maps_[i];
    if (a.rows() != d || a.cols() == 0 || a.cols() > d) {
      throw Error(ErrorKind::DimMismatch, "BlDatum: every map must be d x k_i with 1 <= k_i <= d");
    }
    if (!a.allFinite()) throw Error(ErrorKind::DomainError, "BlDatum: non-finite map entry");
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    if (qr.rank() != a.cols()) {
      std::ostringstream os;
      os << "BlDatum: map " << i << " does not have full column rank";
      throw Error(ErrorKind::RankDeficiency, os.str());
    }
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
      throw Error(ErrorKind::DomainError, "BlDatum: weights must be nonnegative");
    }
    wsum += weights_[i];
    wk += weights_[i] * static_cast<double>(a.cols());
  }
  const double dd = static_cast<double>(d);
  scale_invariant_ = std::abs(wk - dd) <= 1e-12 * dd;
  if (!scale_invariant_) {
    if (std::abs(wsum - 1.0) > 1e-12) {
      throw Error(ErrorKind::DomainError,
                  "BlDatum: weights satisfy neither sum w_i k_i = d nor sum w_i = 1");
    }
    warn("BlDatum: sum w_i k_i != d; objective is not scale invariant and may be unbounded");
  }
}

namespace {

// sum_i w_i logdet Phi_i(X)
double weighted_logdet_sum(const BlDatum& datum, const SpdMatrix& x) {
  require_dim(datum, x);
  double s = 0.0;
  for (std::size_t i = 0; i < datum.maps().size(); ++i) {
    if (datum.weights()[i] == 0.0) continue;
    s += datum.weights()[i] * logdet(congruence(datum.maps()[i], x));
  }
  return s;
}

}  // namespace

double bl_objective(const BlDatum& datum, const SpdMatrix& x) {
  if (!datum.scale_invariant()) return -logdet(x) + weighted_logdet_sum(datum, x);
  // Grouped per map so that A_i = I terms cancel exactly.
  require_dim(datum, x);
  const double ld = logdet(x);
  const double d = static_cast<double>(x.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < datum.maps().size(); ++i) {
    const double w = datum.weights()[i];
    if (w == 0.0) continue;
    const Matrix& a = datum.maps()[i];
    s += w * (logdet(congruence(a, x)) - (static_cast<double>(a.cols()) / d) * ld);
  }
  return s;
}

double bl_surrogate_bound(const BlDatum& datum, const SpdMatrix& x, const SpdMatrix& z) {
  require_dim(datum, x);
  require_dim(datum, z);
  double s = -logdet(x);
  for (std::size_t i = 0; i < datum.maps().size(); ++i) {
    const double w = datum.weights()[i];
    if (w == 0.0) continue;
    const Matrix& a = datum.maps()[i];
    const SpdMatrix phi_z = congruence(a, z);
    const Matrix phi_x = a.transpose() * x.mat() * a;
    s += w * (logdet(phi_z) + phi_z.solve(phi_x).trace() - static_cast<double>(a.cols()));
  }
  return s;
}

namespace {

// sum_i w_i A_i Phi_i(X)^{-1} A_i^T
Matrix aggregate(const BlDatum& datum, const SpdMatrix& x) {
  require_dim(datum, x);
  Matrix g = Matrix::Zero(datum.dim(), datum.dim());
  for (std::size_t i = 0; i < datum.maps().size(); ++i) {
    const double w = datum.weights()[i];
    if (w == 0.0) continue;
    const Matrix& a = datum.maps()[i];
    g += w * a * congruence(a, x).solve(a.transpose());
  }
  return g;
}

void check_divergence(const SpdMatrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.mat(), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kDivergenceCondition) {
    throw Error(ErrorKind::DivergenceDetected,
                "bl: iterate condition number exceeds 1e12 (datum likely infeasible)");
  }
}

}  // namespace

SymMatrix bl_gradient_h(const BlDatum& datum, const SpdMatrix& x) {
  return SymMatrix::symmetrized(-aggregate(datum, x));
}

SymMatrix bl_euclidean_gradient(const BlDatum& datum, const SpdMatrix& x) {
  const Eigen::Index d = datum.dim();
  return SymMatrix::symmetrized(aggregate(datum, x) - x.solve(Matrix::Identity(d, d)));
}

SpdMatrix bl_oracle(const SymMatrix& g, const SpdMatrix& anchor) {
  if (g.dim() != anchor.dim()) {
    throw Error(ErrorKind::DimMismatch, "bl_oracle: dimension mismatch");
  }
  try {
    return inverse(SpdMatrix(g));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CholeskyFailure) {
      throw Error(ErrorKind::SingularAggregate,
                  "bl_oracle: aggregate is singular (maps do not span R^d)");
    }
    throw;
  }
}

SpdMatrix bl_map(const BlDatum& datum, const SpdMatrix& x) {
  return bl_oracle(SymMatrix::symmetrized(aggregate(datum, x)), x);
}

double bl_stationarity_residual(const BlDatum& datum, const SpdMatrix& x) {
  return (x.mat() - bl_map(datum, x).mat()).norm() / x.mat().norm();
}

SpdMatrix frobenius_normalize(const SpdMatrix& x) {
  const double d = static_cast<double>(x.dim());
  return SpdMatrix::symmetrized(x.mat() * (std::sqrt(d) / x.mat().norm()));
}

DcProblem<SpdMatrix> make_bl_dc(std::shared_ptr<const BlDatum> datum) {
  DcProblem<SpdMatrix> dc;
  dc.eval_f = [](const SpdMatrix& x) { return -logdet(x); };
  dc.eval_h = [datum](const SpdMatrix& x) { return -weighted_logdet_sum(*datum, x); };
  dc.grad_h = [datum](const SpdMatrix& x) { return bl_gradient_h(*datum, x); };
  dc.oracle = [](const SymMatrix& grad_h, const SpdMatrix& anchor) {
    SpdMatrix next = bl_oracle(SymMatrix::symmetrized(-grad_h.mat()), anchor);
    check_divergence(next);
    return next;
  };
  if (datum->scale_invariant()) dc.gauge = frobenius_normalize;
  return dc;
}

BlResult bl_constant(const BlDatum& datum, const SolverConfig& cfg,
                     const std::optional<SpdMatrix>& start) {
  auto shared = std::make_shared<const BlDatum>(datum);
  const auto dc = make_bl_dc(shared);
  SpdMatrix x0 = start.value_or(SpdMatrix::identity(datum.dim()));
  if (datum.scale_invariant()) x0 = frobenius_normalize(x0);
  auto r = solve(dc, x0, cfg);
  const double f_star = bl_objective(datum, r.point);
  return {f_star, std::move(r.point), std::move(r.trace)};
}

BlDatum read_bl_datum(std::istream& in) {
  long long d = 0;
  if (!(in >> d) || d <= 0) throw Error(ErrorKind::IoError, "BL datum: missing dimension");
  std::vector<Matrix> maps;
  std::vector<double> weights;
  long long k = 0;
  double w = 0.0;
  while (in >> k) {
    if (k <= 0 || !(in >> w)) throw Error(ErrorKind::IoError, "BL datum: bad map header");
    Matrix a(d, k);
    for (long long r = 0; r < d; ++r) {
      for (long long c = 0; c < k; ++c) {
        if (!(in >> a(r, c))) throw Error(ErrorKind::IoError, "BL datum: truncated map");
      }
    }
    maps.push_back(std::move(a));
    weights.push_back(w);
  }
  if (!in.eof()) throw Error(ErrorKind::IoError, "BL datum: unexpected token");
  if (maps.empty()) throw Error(ErrorKind::IoError, "BL datum: no maps");
  return BlDatum(std::move(maps), std::move(weights));
}

BlDatum read_bl_datum_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return read_bl_datum(in);
}

void write_bl_datum(std::ostream& out, const BlDatum& datum) {
  out << datum.dim() << '\n';
  for (std::size_t i = 0; i < datum.maps().size(); ++i) {
    const Matrix& a = datum.maps()[i];
    out << a.cols() << ' ' << format_double(datum.weights()[i]) << '\n';
    write_rows(out, a);
  }
}

}  // namespace cccp
