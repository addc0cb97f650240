#include "cccp/rgd.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace cccp {

void RgdConfig::validate() const {
  if (!(step_size > 0.0)) throw Error(ErrorKind::DomainError, "RgdConfig: step_size must be > 0");
  if (!(backtrack_shrink > 0.0 && backtrack_shrink < 1.0)) {
    throw Error(ErrorKind::DomainError, "RgdConfig: backtrack_shrink must lie in (0, 1)");
  }
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) {
    throw Error(ErrorKind::DomainError, "RgdConfig: armijo_c must lie in (0, 1)");
  }
  if (max_iters < 1) throw Error(ErrorKind::DomainError, "RgdConfig: max_iters must be >= 1");
  if (!(tol >= 0.0)) throw Error(ErrorKind::DomainError, "RgdConfig: tol must be >= 0");
}

SymMatrix riemannian_gradient(const SpdMatrix& x, const SymMatrix& euclidean_grad) {
  if (x.dim() != euclidean_grad.dim()) {
    throw Error(ErrorKind::DimMismatch, "riemannian_gradient: dimension mismatch");
  }
  return SymMatrix::symmetrized(x.mat() * euclidean_grad.mat() * x.mat());
}

SymMatrix riemannian_gradient(const SmoothProblem& p, const SpdMatrix& x) {
  return riemannian_gradient(x, p.euclidean_gradient(x));
}

double riemannian_inner(const SpdMatrix& x, const SymMatrix& u, const SymMatrix& v) {
  return frobenius_inner(x.solve(u.mat()), x.solve(v.mat()).transpose());
}

double riemannian_norm(const SpdMatrix& x, const SymMatrix& v) {
  return std::sqrt(std::max(0.0, riemannian_inner(x, v, v)));
}

namespace {

constexpr double kResolution = 4.0 * std::numeric_limits<double>::epsilon();

struct Roots {
  Matrix half;
  Matrix inv_half;
};

Roots roots_of(const SpdMatrix& x) {
  const EigDecomp e = eig_sym(x.mat());
  return {spectral_apply(e, [](double l) { return std::sqrt(l); }),
          spectral_apply(e, [](double l) { return 1.0 / std::sqrt(l); })};
}

}  // namespace

SpdMatrix exp_map(const SpdMatrix& x, const SymMatrix& v) {
  if (x.dim() != v.dim()) throw Error(ErrorKind::DimMismatch, "exp_map: dimension mismatch");
  const Roots r = roots_of(x);
  const SpdMatrix inner = matrix_exp(SymMatrix::symmetrized(r.inv_half * v.mat() * r.inv_half));
  return SpdMatrix::symmetrized(r.half * inner.mat() * r.half);
}

SymMatrix log_map(const SpdMatrix& x, const SpdMatrix& y) {
  if (x.dim() != y.dim()) throw Error(ErrorKind::DimMismatch, "log_map: dimension mismatch");
  const Roots r = roots_of(x);
  const SymMatrix inner =
      matrix_log(SpdMatrix::symmetrized(r.inv_half * y.mat() * r.inv_half));
  return SymMatrix::symmetrized(r.half * inner.mat() * r.half);
}

SolveResult<SpdMatrix> rgd_solve(const SmoothProblem& p, const SpdMatrix& x0,
                                 const RgdConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  cfg.validate();
  const auto start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
  };

  IterateTrace trace;
  SpdMatrix x = x0;
  double phi = p.value(x);
  if (!std::isfinite(phi)) {
    throw Error(ErrorKind::DomainError, "rgd_solve: objective not finite at start");
  }
  trace.records.push_back(IterateRecord{0, phi});

  for (int k = 1; k <= cfg.max_iters; ++k) {
    const SymMatrix grad = riemannian_gradient(p, x);
    ++trace.gradient_evals;
    ++trace.oracle_calls;
    const double gnorm = riemannian_norm(x, grad);
    if (gnorm <= cfg.tol) {
      trace.converged = true;
      trace.stop_reason = "converged";
      return {std::move(x), std::move(trace)};
    }

    auto fail = [&](const std::string& msg) {
      std::ostringstream os;
      os << "iteration " << k << ": " << msg;
      return SolverError(ErrorKind::StepFailure, os.str(), trace);
    };

    double eta = cfg.step_size;
    std::optional<SpdMatrix> next;
    double phi_next = 0.0;
    while (true) {
      try {
        next.emplace(exp_map(x, SymMatrix::symmetrized(-eta * grad.mat())));
        phi_next = p.value(*next);
      } catch (const Error& e) {
        if (!cfg.use_backtracking) throw fail(e.what());
        phi_next = std::numeric_limits<double>::infinity();
      }
      if (!cfg.use_backtracking) {
        if (!std::isfinite(phi_next)) throw fail("objective not finite after a fixed step");
        break;
      }
      const double wanted = cfg.armijo_c * eta * gnorm * gnorm;
      if (std::isfinite(phi_next) && phi_next <= phi - wanted) break;
      // The decrease Armijo asks for is below what phi can resolve: we are at
      // the rounding floor, not facing a bad direction.
      if (std::isfinite(phi_next) && wanted < kResolution * std::max(1.0, std::abs(phi))) {
        trace.stop_reason = "stalled";
        return {std::move(x), std::move(trace)};
      }
      eta *= cfg.backtrack_shrink;
      if (eta < 1e-16) throw fail("backtracking step size underflow");
    }

    IterateRecord rec;
    rec.k = k;
    rec.phi = phi_next;
    rec.step_frob = (x.mat() - next->mat()).norm();
    rec.step_riem = eta * gnorm;
    rec.wall_ns = elapsed();
    if (cfg.record_trace || trace.records.size() < 2) {
      trace.records.push_back(rec);
    } else {
      trace.records.back() = rec;
    }
    x = std::move(*next);
    phi = phi_next;
  }
  trace.stop_reason = "max_iters";
  return {std::move(x), std::move(trace)};
}

}  // namespace cccp
