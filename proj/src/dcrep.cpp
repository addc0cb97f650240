#include "cccp/dcrep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

namespace cccp {

namespace {

constexpr int kNodes = 15;

struct GaussRule {
  std::array<double, kNodes> x{};
  std::array<double, kNodes> w{};
};

// Legendre roots by Newton from the Chebyshev-like guess.
GaussRule make_rule() {
  GaussRule r;
  const int n = kNodes;
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

const GaussRule& rule() {
  static const GaussRule r = make_rule();
  return r;
}

struct Panel {
  double a, b;
  double coarse, fine, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::DomainError, std::string(what) + " must be finite and > 0");
  }
}

// Bracket of the scalar identity at s in (0, 1]; the bracket is invariant
// under t -> 1/t, so callers fold t onto (0, 1].
double folded_bracket(double x, double s) {
  return std::log1p(s * x) + std::log1p(s / x) - 2.0 * std::log1p(s);
}

}  // namespace

void QuadratureScheme::validate() const {
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0)) {
    throw Error(ErrorKind::DomainError, "QuadratureScheme: tolerances must be >= 0, not both 0");
  }
  if (max_panels < 2) throw Error(ErrorKind::DomainError, "QuadratureScheme: max_panels < 2");
}

QuadratureResult integrate_half_line(const std::function<double(double)>& g,
                                     const QuadratureScheme& scheme) {
  scheme.validate();
  const GaussRule& r = rule();
  // Integrand in u, t = u/(1-u), dt = du/(1-u)^2.
  auto gu = [&](double u) {
    const double om = 1.0 - u;
    const double val = g(u / om) / (om * om);
    if (!std::isfinite(val)) {
      throw Error(ErrorKind::QuadratureNonConvergence, "integrand not finite");
    }
    return val;
  };
  auto gauss = [&](double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kNodes; ++i) s += r.w[i] * gu(c + h * r.x[i]);
    return s * h;
  };
  auto make_panel = [&](double a, double b, double coarse) {
    const double m = 0.5 * (a + b);
    const double fine = gauss(a, m) + gauss(m, b);
    return Panel{a, b, coarse, fine, std::abs(fine - coarse)};
  };

  std::priority_queue<Panel> queue;
  double total_err = 0.0;
  for (auto [a, b] : {std::pair{0.0, 0.5}, std::pair{0.5, 1.0}}) {
    Panel p = make_panel(a, b, gauss(a, b));
    total_err += p.err;
    queue.push(p);
  }
  std::vector<Panel> done;
  auto estimate = [&] {
    double v = 0.0;
    auto copy = queue;
    while (!copy.empty()) {
      v += copy.top().fine;
      copy.pop();
    }
    return v;
  };

  int panels = 2;
  double value = estimate();
  while (total_err > std::max(scheme.abs_tol, scheme.rel_tol * std::abs(value))) {
    if (panels >= scheme.max_panels) {
      std::ostringstream os;
      os << "quadrature: panel budget " << scheme.max_panels
         << " exhausted, error estimate " << total_err;
      throw Error(ErrorKind::QuadratureNonConvergence, os.str());
    }
    Panel worst = queue.top();
    queue.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) {
      // cannot split further; accept as is
      done.push_back(worst);
      total_err -= worst.err;
      if (queue.empty()) break;
      continue;
    }
    // children's coarse values are the halves already summed into worst.fine
    Panel left = make_panel(worst.a, m, gauss(worst.a, m));
    Panel right = make_panel(m, worst.b, gauss(m, worst.b));
    total_err += left.err + right.err - worst.err;
    value += left.fine + right.fine - worst.fine;
    queue.push(left);
    queue.push(right);
    ++panels;
    // resync the running sums now and then
    if ((panels & 255) == 0) {
      total_err = 0.0;
      auto copy = queue;
      while (!copy.empty()) {
        total_err += copy.top().err;
        copy.pop();
      }
      value = estimate();
      for (const Panel& p : done) value += p.fine;
    }
  }

  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(), [](const Panel& a, const Panel& b) { return a.a < b.a; });
  std::vector<double> parts, errs;
  parts.reserve(done.size());
  errs.reserve(done.size());
  for (const Panel& p : done) {
    parts.push_back(p.fine);
    errs.push_back(p.err);
  }
  QuadratureResult out;
  out.value = pairwise_sum(parts, 0, parts.size());
  out.error_estimate = pairwise_sum(errs, 0, errs.size());
  out.panels = panels;
  return out;
}

double sqlog_integrand(double x, double t) {
  require_positive(x, "sqlog_integrand: x");
  require_positive(t, "sqlog_integrand: t");
  const double s = std::min(t, 1.0 / t);
  return folded_bracket(x, s) / t;
}

double sqlog_by_quadrature(double x, const QuadratureScheme& scheme) {
  require_positive(x, "sqlog_by_quadrature: x");
  return integrate_half_line([x](double t) { return sqlog_integrand(x, t); }, scheme).value;
}

DcParts dc_distance_parts(const SpdMatrix& x, const SpdMatrix& y, double t) {
  if (x.dim() != y.dim()) throw Error(ErrorKind::DimMismatch, "dc_distance_parts: dimension mismatch");
  require_positive(t, "dc_distance_parts: t");
  const double n = static_cast<double>(x.dim());
  DcParts p;
  p.f = -logdet(x) - logdet(y) - 2.0 * n * std::log1p(t);
  p.h = -logdet(SpdMatrix::symmetrized(x.mat() + t * y.mat())) -
        logdet(SpdMatrix::symmetrized(t * x.mat() + y.mat()));
  return p;
}

namespace {

// f_t - h_t = sum_i bracket(lambda_i, t) with lambda the generalized
// eigenvalues; evaluating it this way avoids the cancellation between the
// two logdet sums near t = 0 and t = inf.
double folded_matrix_integrand(const Vector& lambda, double t) {
  const double s = std::min(t, 1.0 / t);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) acc += folded_bracket(lambda[i], s);
  return acc / t;
}

}  // namespace

double dc_distance_integrand(const SpdMatrix& x, const SpdMatrix& y, double t) {
  require_positive(t, "dc_distance_integrand: t");
  return folded_matrix_integrand(generalized_eigenvalues(x, y), t);
}

double dc_distance_squared(const SpdMatrix& x, const SpdMatrix& y, const QuadratureScheme& scheme) {
  if (x.dim() != y.dim()) throw Error(ErrorKind::DimMismatch, "dc_distance_squared: dimension mismatch");
  const double n = static_cast<double>(x.dim());
  const double lx = logdet(x), ly = logdet(y);
  // det-1 pair; with m the mean log generalized eigenvalue,
  // d^2(X,Y) = d^2(X~,Y~) + n m^2.
  const SpdMatrix xn = SpdMatrix::symmetrized(x.mat() * std::exp(-lx / n));
  const SpdMatrix yn = SpdMatrix::symmetrized(y.mat() * std::exp(-ly / n));
  const Vector lambda = generalized_eigenvalues(xn, yn);
  const double m = (ly - lx) / n;
  const QuadratureResult q = integrate_half_line(
      [&lambda](double t) { return folded_matrix_integrand(lambda, t); }, scheme);
  return q.value + n * m * m;
}

}  // namespace cccp
