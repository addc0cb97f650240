#include "cccp/bench.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "cccp/generate.hpp"
#include "cccp/matrix_io.hpp"
#include "cccp/svg_chart.hpp"

namespace cccp {

SmoothProblem smooth_barycenter(std::shared_ptr<const BarycenterProblem> p) {
  return {[p](const SpdMatrix& x) { return barycenter_objective(*p, x); },
          [p](const SpdMatrix& x) { return barycenter_euclidean_gradient(*p, x); }};
}

SmoothProblem smooth_bl(std::shared_ptr<const BlDatum> datum) {
  return {[datum](const SpdMatrix& x) { return bl_objective(*datum, x); },
          [datum](const SpdMatrix& x) { return bl_euclidean_gradient(*datum, x); }};
}

std::vector<std::string> expand_solver_ids(const std::vector<std::string>& ids) {
  static const std::set<std::string> known{"cccp", "rgd-fixed-1e-1", "rgd-fixed-1e-2", "rgd-bt"};
  std::vector<std::string> out;
  auto add = [&](const std::string& s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  for (const auto& id : ids) {
    if (id == "rgd-fixed") {
      add("rgd-fixed-1e-1");
      add("rgd-fixed-1e-2");
    } else if (known.count(id)) {
      add(id);
    } else {
      throw Error(ErrorKind::DomainError, "unknown solver '" + id + "'");
    }
  }
  return out;
}

void BenchConfig::validate() const {
  if (apps.empty() || dims.empty() || solvers.empty()) {
    throw Error(ErrorKind::DomainError, "bench: apps, dims and solvers must be non-empty");
  }
  for (const auto& a : apps) {
    if (a != "sqrt" && a != "bl") throw Error(ErrorKind::DomainError, "bench: unknown app '" + a + "'");
  }
  for (int d : dims) {
    if (d < 1) throw Error(ErrorKind::DomainError, "bench: dims must be >= 1");
  }
  expand_solver_ids(solvers);
  if (seeds < 1 || jobs < 1 || max_iters < 1) {
    throw Error(ErrorKind::DomainError, "bench: seeds, jobs and max_iters must be >= 1");
  }
  if (!(tol >= 0) || !(target_gap > 0)) throw Error(ErrorKind::DomainError, "bench: bad tolerances");
}

namespace {

struct Instance {
  SmoothProblem smooth;
  DcProblem<SpdMatrix> dc;
  SpdMatrix x0;
  double phi_star;
  std::function<double(const SpdMatrix&)> residual;
};

// The instance depends on (app, dim, seed) only, so every solver sees the same one.
Instance make_instance(const std::string& app, int dim, std::uint64_t seed) {
  Rng rng(counter_hash(seed, static_cast<std::uint64_t>(dim) * 2 + (app == "bl")));
  if (app == "sqrt") {
    // spectrum symmetric about 1 in log scale, so no recentring is needed
    const SpdMatrix m = random_spd(dim, 1e2, rng);
    auto p = std::make_shared<const BarycenterProblem>(square_root_problem(m));
    return {smooth_barycenter(p), make_barycenter_dc(p), SpdMatrix::identity(dim),
            barycenter_objective(*p, matrix_sqrt(m)),
            [p](const SpdMatrix& x) { return barycenter_residual(*p, x); }};
  }
  const int k = std::max(1, dim / 4);
  auto datum = std::make_shared<const BlDatum>(geometric_bl_datum(dim, k, rng));
  const SpdMatrix x0 = frobenius_normalize(random_spd(dim, 10.0, rng));
  return {smooth_bl(datum), make_bl_dc(datum), x0, 0.0,
          [datum](const SpdMatrix& x) { return bl_stationarity_residual(*datum, x); }};
}

}  // namespace

BenchRecord run_bench_cell(const std::string& app, const std::string& solver, int dim,
                           std::uint64_t seed, const BenchConfig& cfg) {
  Instance inst = make_instance(app, dim, seed);
  BenchRecord rec;
  rec.app = app;
  rec.solver = solver;
  rec.dim = dim;
  rec.seed = seed;
  rec.phi_star = inst.phi_star;

  std::optional<SpdMatrix> point;
  try {
    if (solver == "cccp") {
      SolverConfig sc;
      sc.max_iters = cfg.max_iters;
      sc.step_tol = cfg.tol;
      sc.objective_tol = cfg.tol;
      auto r = solve(inst.dc, inst.x0, sc);
      point.emplace(std::move(r.point));
      rec.trace = std::move(r.trace);
      rec.iters = rec.trace.oracle_calls;
    } else {
      RgdConfig rc;
      rc.max_iters = cfg.max_iters;
      rc.tol = cfg.tol;
      if (solver == "rgd-bt") {
        rc.use_backtracking = true;
        rc.step_size = 1.0;
      } else {
        rc.use_backtracking = false;
        rc.step_size = solver == "rgd-fixed-1e-1" ? 1e-1 : 1e-2;
      }
      auto r = rgd_solve(inst.smooth, inst.x0, rc);
      point.emplace(std::move(r.point));
      rec.trace = std::move(r.trace);
      rec.iters = rec.trace.gradient_evals;
    }
  } catch (const SolverError& e) {
    rec.trace = e.partial_trace();
    rec.trace.stop_reason = "error: " + std::string(kind_name(e.kind()));
    rec.iters = std::max(rec.trace.oracle_calls, rec.trace.gradient_evals);
  }
  rec.stop_reason = rec.trace.stop_reason;
  rec.phi = rec.trace.records.empty() ? std::nan("") : rec.trace.last().phi;
  rec.residual = point ? inst.residual(*point) : std::nan("");
  rec.wall_ns = rec.trace.records.empty() ? 0 : rec.trace.last().wall_ns;
  for (const IterateRecord& r : rec.trace.records) {
    if (r.phi - rec.phi_star <= cfg.target_gap) {
      rec.calls_to_target = r.k;
      break;
    }
  }
  return rec;
}

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
  cfg.validate();
  const auto solvers = expand_solver_ids(cfg.solvers);
  struct Cell {
    std::string app, solver;
    int dim;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto& app : cfg.apps)
    for (int d : cfg.dims)
      for (int s = 0; s < cfg.seeds; ++s)
        for (const auto& sol : solvers)
          cells.push_back({app, sol, d, cfg.base_seed + static_cast<std::uint64_t>(s)});

  std::vector<BenchRecord> out(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        const Cell& c = cells[i];
        out[i] = run_bench_cell(c.app, c.solver, c.dim, c.seed, cfg);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::min<int>(cfg.jobs, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

std::string opt_num(double v) { return std::isfinite(v) ? format_double(v) : ""; }

}  // namespace

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& rows) {
  out << kBenchHeader << '\n';
  for (const auto& r : rows) {
    out << r.app << ',' << r.solver << ',' << r.dim << ',' << r.seed << ',' << r.iters << ','
        << opt_num(r.phi) << ',' << opt_num(r.residual) << ',' << r.wall_ns << '\n';
  }
}

void write_bench_targets_csv(std::ostream& out, const std::vector<BenchRecord>& rows) {
  out << kBenchTargetHeader << '\n';
  for (const auto& r : rows) {
    out << r.app << ',' << r.solver << ',' << r.dim << ',' << r.seed << ',' << opt_num(r.phi_star)
        << ',' << opt_num(r.phi - r.phi_star) << ',' << r.calls_to_target << ',' << r.stop_reason
        << '\n';
  }
}

std::vector<std::filesystem::path> write_bench_outputs(const std::filesystem::path& dir,
                                                       const std::vector<BenchRecord>& rows) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(dir / name);
    if (!f) throw Error(ErrorKind::IoError, "cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("bench.csv");
    write_bench_csv(f, rows);
  }
  {
    auto f = open("bench_targets.csv");
    write_bench_targets_csv(f, rows);
  }

  // one chart per (app, dim), first seed only
  std::map<std::pair<std::string, int>, std::vector<const BenchRecord*>> groups;
  std::vector<std::pair<std::string, int>> order;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.app, r.dim);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    if (it->second.empty() || it->second.front()->seed == r.seed) it->second.push_back(&r);
  }
  std::vector<std::filesystem::path> paths;
  for (const auto& key : order) {
    ChartPanel by_calls{key.first + " d=" + std::to_string(key.second), "oracle calls",
                        "objective gap", true, {}};
    ChartPanel by_time{key.first + " d=" + std::to_string(key.second), "wall time (ms)",
                       "objective gap", true, {}};
    for (const BenchRecord* r : groups[key]) {
      Series a{r->solver, {}, {}}, b{r->solver, {}, {}};
      for (const auto& it : r->trace.records) {
        const double gap = it.phi - r->phi_star;
        a.x.push_back(static_cast<double>(it.k));
        a.y.push_back(gap);
        b.x.push_back(static_cast<double>(it.wall_ns) * 1e-6);
        b.y.push_back(gap);
      }
      by_calls.series.push_back(std::move(a));
      by_time.series.push_back(std::move(b));
    }
    const auto path = dir / (key.first + "_d" + std::to_string(key.second) + ".svg");
    write_svg_file(path, {by_calls, by_time});
    paths.push_back(path);
  }
  return paths;
}

}  // namespace cccp
