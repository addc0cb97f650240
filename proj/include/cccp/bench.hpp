#pragma once

// CCCP versus Riemannian gradient descent on seeded sqrt and BL instances.
// Every cell (app, solver, dim, seed) is an independent solve; cells run on a
// small thread pool and come back in grid order.

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "cccp/bl.hpp"
#include "cccp/rgd.hpp"
#include "cccp/sdiv.hpp"

namespace cccp {

SmoothProblem smooth_barycenter(std::shared_ptr<const BarycenterProblem> p);
SmoothProblem smooth_bl(std::shared_ptr<const BlDatum> datum);

/// Solver ids: "cccp", "rgd-fixed-1e-1", "rgd-fixed-1e-2", "rgd-bt".
/// "rgd-fixed" expands to both fixed steps.
std::vector<std::string> expand_solver_ids(const std::vector<std::string>& ids);

struct BenchConfig {
  std::vector<std::string> apps{"sqrt", "bl"};
  std::vector<int> dims{4, 16, 64};
  std::vector<std::string> solvers{"cccp", "rgd-fixed-1e-1", "rgd-fixed-1e-2", "rgd-bt"};
  int seeds = 1;
  std::uint64_t base_seed = 0;
  int jobs = 1;
  int max_iters = 3000;
  double tol = 1e-10;         // CCCP step tol and RGD gradient-norm tol
  double target_gap = 1e-8;   // for calls_to_target

  void validate() const;
};

struct BenchRecord {
  std::string app;
  std::string solver;
  int dim = 0;
  std::uint64_t seed = 0;
  std::size_t iters = 0;  // oracle calls (CCCP) or gradient evaluations (RGD)
  double phi = 0.0;
  double residual = 0.0;
  std::int64_t wall_ns = 0;
  // not part of bench.csv
  double phi_star = 0.0;
  long calls_to_target = -1;  // -1: target gap never reached
  std::string stop_reason;
  IterateTrace trace;
};

inline constexpr const char* kBenchHeader = "app,solver,dim,seed,iters,phi,residual,wall_ns";
inline constexpr const char* kBenchTargetHeader =
    "app,solver,dim,seed,phi_star,final_gap,calls_to_target,stop_reason";

/// Single cell. Deterministic in everything but wall time.
BenchRecord run_bench_cell(const std::string& app, const std::string& solver, int dim,
                           std::uint64_t seed, const BenchConfig& cfg);

/// Full grid, ordered app, dim, seed, solver.
std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& rows);
void write_bench_targets_csv(std::ostream& out, const std::vector<BenchRecord>& rows);

/// bench.csv, bench_targets.csv and one SVG per (app, dim) in `dir`.
/// Returns the SVG paths.
std::vector<std::filesystem::path> write_bench_outputs(const std::filesystem::path& dir,
                                                       const std::vector<BenchRecord>& rows);

}  // namespace cccp
