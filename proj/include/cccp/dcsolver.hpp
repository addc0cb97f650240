#pragma once

// Euclidean convex-concave procedure for objectives phi = f - h on a manifold
// of positive points, with f and h convex in the ambient Euclidean space.
//
// Each step linearizes h at the current iterate and asks a problem-specific
// oracle for the global minimizer of the convex surrogate
//
//   Q(x, x_k) = f(x) - h(x_k) - <grad h(x_k), x - x_k>
//
// over the manifold. Variants: exact (solve), approximate oracle
// (solve_inexact) and incremental finite-sum (solve_incremental).
//
// The engine is generic over the point type; PointSpace<> supplies the
// ambient pairing and the two step distances recorded in the trace.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cccp/pdcore.hpp"

namespace cccp {

template <class Point>
struct PointSpace;

template <>
struct PointSpace<SpdMatrix> {
  using Tangent = SymMatrix;
  using Raw = Matrix;

  static const Raw& raw(const SpdMatrix& x) { return x.mat(); }
  static const Raw& raw(const SymMatrix& g) { return g.mat(); }
  static Tangent tangent(const Raw& r) { return SymMatrix::symmetrized(r); }
  static Raw zero_like(const Raw& r) { return Raw::Zero(r.rows(), r.cols()); }
  static double pairing(const Raw& g, const Raw& v) {
    return frobenius_inner(g, v);
  }
  static double euclidean_distance(const SpdMatrix& a, const SpdMatrix& b) {
    return (a.mat() - b.mat()).norm();
  }
  static double riemannian_distance(const SpdMatrix& a, const SpdMatrix& b) {
    return cccp::riemannian_distance(a, b);
  }
};

template <>
struct PointSpace<PositiveVector> {
  using Tangent = Vector;
  using Raw = Vector;

  static const Raw& raw(const PositiveVector& x) { return x.vec(); }
  static const Raw& raw(const Vector& g) { return g; }
  static Tangent tangent(const Raw& r) { return r; }
  static Raw zero_like(const Raw& r) { return Raw::Zero(r.size()); }
  static double pairing(const Raw& g, const Raw& v) { return g.dot(v); }
  static double euclidean_distance(const PositiveVector& a,
                                   const PositiveVector& b) {
    return (a.vec() - b.vec()).norm();
  }
  static double riemannian_distance(const PositiveVector& a,
                                    const PositiveVector& b) {
    return cccp::riemannian_distance(a, b);
  }
};

/// phi = f - h with Euclidean gradient of h and the surrogate oracle
/// argmin_x f(x) - <G, x>.
template <class Point>
struct DcProblem {
  using Tangent = typename PointSpace<Point>::Tangent;

  std::function<double(const Point&)> eval_f;
  std::function<double(const Point&)> eval_h;
  std::function<Tangent(const Point&)> grad_h;
  // (G, anchor) -> argmin_x f(x) - <G, x>; anchor is the linearization point.
  std::function<Point(const Tangent&, const Point&)> oracle;
  // Optional scale fix for objectives invariant under it; applied after every
  // exact or inexact step.
  std::function<Point(const Point&)> gauge;
  std::optional<double> smoothness_L;

  double objective(const Point& x) const { return eval_f(x) - eval_h(x); }
};

/// h = (1/m) sum_i h_i; the incremental scheme touches one h_i per step.
template <class Point>
struct FiniteSumDcProblem {
  using Tangent = typename PointSpace<Point>::Tangent;

  std::function<double(const Point&)> eval_f;
  std::size_t m = 0;
  std::function<double(std::size_t, const Point&)> eval_h_i;
  std::function<Tangent(std::size_t, const Point&)> grad_h_i;
  std::function<Point(const Tangent&, const Point&)> oracle;

  double eval_h(const Point& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += eval_h_i(i, x);
    return s / static_cast<double>(m);
  }
  double objective(const Point& x) const { return eval_f(x) - eval_h(x); }
};

struct SolverConfig {
  int max_iters = 10000;
  // Converged when |phi_k - phi_{k-1}| <= objective_tol * max(1, |phi_k|)
  // and d(X_{k-1}, X_k) <= step_tol both hold.
  double objective_tol = 1e-10;
  double step_tol = 1e-9;
  bool record_trace = true;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (max_iters < 1) {
      throw Error(ErrorKind::DomainError, "SolverConfig: max_iters must be >= 1");
    }
    if (!(objective_tol >= 0.0) || !(step_tol >= 0.0)) {
      throw Error(ErrorKind::DomainError,
                  "SolverConfig: tolerances must be nonnegative");
    }
  }
};

/// Row k describes iterate X_k and the step X_{k-1} -> X_k that produced it.
/// Row 0 is the starting point; its step fields are NaN.
struct IterateRecord {
  long k = 0;
  double phi = 0.0;
  double surrogate = std::numeric_limits<double>::quiet_NaN();
  double step_frob = std::numeric_limits<double>::quiet_NaN();
  double step_riem = std::numeric_limits<double>::quiet_NaN();
  double eta = std::numeric_limits<double>::quiet_NaN();
  std::int64_t wall_ns = 0;
};

struct IterateTrace {
  std::vector<IterateRecord> records;
  std::size_t oracle_calls = 0;
  std::size_t gradient_evals = 0;
  bool converged = false;
  std::string stop_reason;

  const IterateRecord& last() const { return records.back(); }
  std::size_t iterations() const { return records.empty() ? 0 : records.back().k; }
};

/// Failure inside a solve; carries the trace up to the failing step.
class SolverError : public Error {
 public:
  SolverError(ErrorKind kind, const std::string& what, IterateTrace partial)
      : Error(kind, what), partial_(std::move(partial)) {}

  const IterateTrace& partial_trace() const noexcept { return partial_; }

 private:
  IterateTrace partial_;
};

template <class Point>
struct SolveResult {
  Point point;
  IterateTrace trace;
};

template <class Point>
struct InexactResult {
  Point point;
  double eta = 0.0;  // reported suboptimality Q(point) - min Q >= 0
};

template <class Point>
using InexactOracle = std::function<InexactResult<Point>(
    const typename PointSpace<Point>::Tangent& g, const Point& anchor,
    double eps)>;

/// Per-index linearizations (anchor_i, h_i(anchor_i), grad h_i(anchor_i))
/// with the running mean gradient and the constant part of the mean
/// linearization kept up to date on every update.
template <class Point>
class SurrogateTable {
 public:
  using Space = PointSpace<Point>;
  using Tangent = typename Space::Tangent;
  using Raw = typename Space::Raw;

  struct Entry {
    Point anchor;
    double value;
    Tangent grad;
  };

  void reset(std::vector<Entry> entries) {
    entries_ = std::move(entries);
    grad_sum_ = Space::zero_like(Space::raw(entries_.front().grad));
    offset_sum_ = 0.0;
    for (const Entry& e : entries_) {
      grad_sum_ += Space::raw(e.grad);
      offset_sum_ += e.value - Space::pairing(Space::raw(e.grad), Space::raw(e.anchor));
    }
  }

  void update(std::size_t i, Point anchor, double value, Tangent grad) {
    Entry& e = entries_.at(i);
    grad_sum_ += Space::raw(grad) - Space::raw(e.grad);
    offset_sum_ += (value - Space::pairing(Space::raw(grad), Space::raw(anchor))) -
                   (e.value - Space::pairing(Space::raw(e.grad), Space::raw(e.anchor)));
    e = Entry{std::move(anchor), value, std::move(grad)};
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const Entry& entry(std::size_t i) const { return entries_.at(i); }

  /// (1/m) sum_i grad_i, as maintained incrementally.
  Raw aggregate_gradient() const { return grad_sum_ / static_cast<double>(size()); }

  /// (1/m) sum_i grad_i, summed from scratch.
  Raw recomputed_aggregate_gradient() const {
    Raw s = Space::zero_like(grad_sum_);
    for (const Entry& e : entries_) s += Space::raw(e.grad);
    return s / static_cast<double>(size());
  }

  /// (1/m) sum_i [value_i + <grad_i, x - anchor_i>], a minorant of h.
  double minorant(const Point& x) const {
    return (offset_sum_ + Space::pairing(grad_sum_, Space::raw(x))) /
           static_cast<double>(size());
  }

 private:
  std::vector<Entry> entries_;
  Raw grad_sum_;
  double offset_sum_ = 0.0;
};

/// Counter-based index sampler: draw k of a run keyed by seed is a pure
/// function of (seed, k), uniform on [0, m).
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) noexcept;
std::size_t uniform_index(std::uint64_t seed, std::uint64_t counter, std::size_t m) noexcept;

namespace detail {

using Clock = std::chrono::steady_clock;

inline std::int64_t elapsed_ns(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start)
      .count();
}

inline bool is_numeric_failure(ErrorKind kind) {
  return kind == ErrorKind::CholeskyFailure || kind == ErrorKind::DomainError ||
         kind == ErrorKind::EigFailure;
}

inline void push_record(IterateTrace& trace, const IterateRecord& rec, bool keep_all) {
  if (keep_all || trace.records.size() < 2) {
    trace.records.push_back(rec);
  } else {
    trace.records.back() = rec;
  }
}

template <class Point>
double linearization(const typename PointSpace<Point>::Tangent& g, const Point& x,
                     const Point& anchor) {
  using Space = PointSpace<Point>;
  return Space::pairing(Space::raw(g), Space::raw(x) - Space::raw(anchor));
}

// Shared driver for the exact and inexact variants. `step` maps
// (grad h(X_k), X_k) to (X_{k+1} before gauge, eta).
template <class Point, class StepFn>
SolveResult<Point> run_cccp(const DcProblem<Point>& p, const Point& x0,
                            const SolverConfig& cfg, ErrorKind step_failure,
                            StepFn&& step) {
  using Space = PointSpace<Point>;
  cfg.validate();
  const auto start = Clock::now();

  IterateTrace trace;
  Point x = x0;
  double fx = p.eval_f(x);
  double hx = p.eval_h(x);
  double phi = fx - hx;
  if (!std::isfinite(phi)) {
    throw Error(ErrorKind::DomainError, "solve: objective is not finite at the start point");
  }
  trace.records.push_back(IterateRecord{0, phi});

  for (int k = 1; k <= cfg.max_iters; ++k) {
    auto fail = [&](ErrorKind kind, const std::string& msg) -> SolverError {
      std::ostringstream os;
      os << "iteration " << k << ": " << msg;
      return SolverError(kind, os.str(), trace);
    };

    const auto g = p.grad_h(x);
    ++trace.gradient_evals;

    std::optional<Point> next;
    double eta = std::numeric_limits<double>::quiet_NaN();
    try {
      auto [candidate, reported_eta] = step(g, x);
      ++trace.oracle_calls;
      eta = reported_eta;
      next.emplace(p.gauge ? p.gauge(candidate) : std::move(candidate));
    } catch (const SolverError&) {
      throw;
    } catch (const Error& e) {
      const ErrorKind kind = is_numeric_failure(e.kind()) ? step_failure : e.kind();
      throw fail(kind, e.what());
    }

    const double fn = p.eval_f(*next);
    const double hn = p.eval_h(*next);
    const double phi_next = fn - hn;
    if (!std::isfinite(phi_next)) {
      throw fail(step_failure, "objective is not finite at the oracle output");
    }

    IterateRecord rec;
    rec.k = k;
    rec.phi = phi_next;
    rec.surrogate = fn - hx - linearization(g, *next, x);
    rec.step_frob = Space::euclidean_distance(x, *next);
    rec.step_riem = Space::riemannian_distance(x, *next);
    rec.eta = eta;
    rec.wall_ns = elapsed_ns(start);
    push_record(trace, rec, cfg.record_trace);

    const bool objective_ok =
        std::abs(phi_next - phi) <= cfg.objective_tol * std::max(1.0, std::abs(phi_next));
    const bool step_ok = rec.step_riem <= cfg.step_tol;

    x = std::move(*next);
    fx = fn;
    hx = hn;
    phi = phi_next;
    if (objective_ok && step_ok) {
      trace.converged = true;
      trace.stop_reason = "converged";
      return {std::move(x), std::move(trace)};
    }
  }
  trace.stop_reason = "max_iters";
  return {std::move(x), std::move(trace)};
}

}  // namespace detail

/// Q(X, anchor) = f(X) - h(anchor) - <grad h(anchor), X - anchor>.
template <class Point>
double surrogate_value(const DcProblem<Point>& p, const Point& x, const Point& anchor) {
  return p.eval_f(x) - p.eval_h(anchor) -
         detail::linearization(p.grad_h(anchor), x, anchor);
}

/// One CCCP update: gauge(oracle(grad h(X_k), X_k)).
template <class Point>
Point cccp_step(const DcProblem<Point>& p, const Point& xk) {
  try {
    Point next = p.oracle(p.grad_h(xk), xk);
    if (p.gauge) next = p.gauge(next);
    if (!std::isfinite(p.objective(next))) {
      throw Error(ErrorKind::OracleFailure, "cccp_step: objective not finite at oracle output");
    }
    return next;
  } catch (const Error& e) {
    if (detail::is_numeric_failure(e.kind())) {
      throw Error(ErrorKind::OracleFailure, std::string("cccp_step: ") + e.what());
    }
    throw;
  }
}

/// Exact CCCP: iterate cccp_step until both tolerances hold or max_iters.
template <class Point>
SolveResult<Point> solve(const DcProblem<Point>& p, const Point& x0, const SolverConfig& cfg) {
  return detail::run_cccp(
      p, x0, cfg, ErrorKind::OracleFailure,
      [&](const auto& g, const Point& x) {
        return std::pair<Point, double>(p.oracle(g, x),
                                        std::numeric_limits<double>::quiet_NaN());
      });
}

/// CCCP with an approximate surrogate minimizer. `eps` is forwarded to the
/// inner solver as the requested accuracy; the eta it reports is logged per
/// step.
template <class Point>
SolveResult<Point> solve_inexact(const DcProblem<Point>& p, const Point& x0,
                                 const SolverConfig& cfg, double eps,
                                 const InexactOracle<Point>& inner) {
  if (!(eps >= 0.0)) {
    throw Error(ErrorKind::DomainError, "solve_inexact: eps must be nonnegative");
  }
  return detail::run_cccp(
      p, x0, cfg, ErrorKind::InnerSolverFailure,
      [&](const auto& g, const Point& x) {
        InexactResult<Point> r = inner(g, x, eps);
        if (!std::isfinite(r.eta) || r.eta < 0.0) {
          throw Error(ErrorKind::InnerSolverFailure,
                      "inner solver reported an invalid suboptimality");
        }
        return std::pair<Point, double>(std::move(r.point), r.eta);
      });
}

/// Incremental surrogate scheme for h = (1/m) sum h_i: one component is
/// relinearized per step at an index drawn from the counter-based sampler.
/// The recorded surrogate column is S_{k-1}(X_k), which is nonincreasing.
/// Stops after m consecutive Riemannian steps <= step_tol, or max_iters.
/// The optional observer sees the table after every update.
template <class Point>
SolveResult<Point> solve_incremental(
    const FiniteSumDcProblem<Point>& p, const Point& x0, const SolverConfig& cfg,
    const std::type_identity_t<std::function<void(const SurrogateTable<Point>&)>>& observer = {}) {
  using Space = PointSpace<Point>;
  cfg.validate();
  if (p.m == 0) {
    throw Error(ErrorKind::DomainError, "solve_incremental: empty finite sum");
  }
  const auto start = detail::Clock::now();

  IterateTrace trace;
  SurrogateTable<Point> table;
  {
    std::vector<typename SurrogateTable<Point>::Entry> entries;
    entries.reserve(p.m);
    for (std::size_t i = 0; i < p.m; ++i) {
      entries.push_back({x0, p.eval_h_i(i, x0), p.grad_h_i(i, x0)});
    }
    trace.gradient_evals += p.m;
    table.reset(std::move(entries));
  }
  if (observer) observer(table);

  Point x = x0;
  const double phi0 = p.objective(x);
  if (!std::isfinite(phi0)) {
    throw Error(ErrorKind::DomainError, "solve_incremental: objective not finite at start");
  }
  trace.records.push_back(IterateRecord{0, phi0});

  std::size_t small_steps = 0;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    std::optional<Point> next;
    try {
      next.emplace(p.oracle(Space::tangent(table.aggregate_gradient()), x));
      ++trace.oracle_calls;
    } catch (const Error& e) {
      const ErrorKind kind =
          detail::is_numeric_failure(e.kind()) ? ErrorKind::OracleFailure : e.kind();
      std::ostringstream os;
      os << "iteration " << k << ": " << e.what();
      throw SolverError(kind, os.str(), trace);
    }

    const double fn = p.eval_f(*next);
    const double surrogate = fn - table.minorant(*next);
    if (!std::isfinite(surrogate)) {
      std::ostringstream os;
      os << "iteration " << k << ": surrogate not finite at oracle output";
      throw SolverError(ErrorKind::OracleFailure, os.str(), trace);
    }

    const bool last_iter = k == cfg.max_iters;
    IterateRecord rec;
    rec.k = k;
    rec.surrogate = surrogate;
    rec.step_frob = Space::euclidean_distance(x, *next);
    rec.step_riem = Space::riemannian_distance(x, *next);

    const std::size_t i = uniform_index(cfg.rng_seed, static_cast<std::uint64_t>(k), p.m);
    table.update(i, *next, p.eval_h_i(i, *next), p.grad_h_i(i, *next));
    ++trace.gradient_evals;
    if (observer) observer(table);

    small_steps = rec.step_riem <= cfg.step_tol ? small_steps + 1 : 0;
    const bool done = small_steps >= p.m;
    x = std::move(*next);

    // The full objective costs m component evaluations; only pay for it when
    // the row is kept.
    if (cfg.record_trace || done || last_iter) {
      rec.phi = p.objective(x);
    }
    rec.wall_ns = detail::elapsed_ns(start);
    detail::push_record(trace, rec, cfg.record_trace);

    if (done) {
      trace.converged = true;
      trace.stop_reason = "converged";
      return {std::move(x), std::move(trace)};
    }
  }
  trace.stop_reason = "max_iters";
  return {std::move(x), std::move(trace)};
}

/// |Q(Z, anchor) - phi(Z)| <= (L/2) ||anchor - Z||^2 + 1e-10.
template <class Point>
bool surrogate_gap_bound_check(const DcProblem<Point>& p, const Point& anchor,
                               const Point& z, double L) {
  using Space = PointSpace<Point>;
  const double theta = surrogate_value(p, z, anchor) - p.objective(z);
  const double dist = Space::euclidean_distance(anchor, z);
  return std::abs(theta) <= 0.5 * L * dist * dist + 1e-10;
}

}  // namespace cccp
