#include "cccp/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "cccp/bl.hpp"
#include "cccp/matrix_io.hpp"
#include "cccp/scaling.hpp"
#include "cccp/sdiv.hpp"
#include "cccp/svg_chart.hpp"
#include "cccp/trace_csv.hpp"
#include "cccp/tyler.hpp"

namespace cccp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::map<std::string, std::vector<std::string>>& required_inputs() {
  static const std::map<std::string, std::vector<std::string>> req{
      {"scale", {"matrix"}},         {"tyler", {"samples"}}, {"sqrt", {"matrix"}},
      {"barycenter", {"atoms", "weights"}}, {"bl", {"datum"}}};
  return req;
}

}  // namespace

void RunManifest::validate() const {
  if (schema_version != kSchemaVersion) {
    throw Error(ErrorKind::IoError,
                "manifest: unsupported schema_version " + std::to_string(schema_version));
  }
  const auto it = required_inputs().find(app);
  if (it == required_inputs().end()) throw Error(ErrorKind::IoError, "manifest: unknown app '" + app + "'");
  for (const auto& role : it->second) {
    auto in = inputs.find(role);
    if (in == inputs.end() || in->second.empty()) {
      throw Error(ErrorKind::IoError, "manifest: app '" + app + "' needs input '" + role + "'");
    }
  }
  for (const auto& [role, paths] : inputs) {
    for (const auto& p : paths) {
      if (!fs::exists(p)) throw Error(ErrorKind::IoError, "manifest: input " + role + " '" + p + "' does not exist");
    }
  }
  solver.validate();
}

const std::string& RunManifest::input(const std::string& role) const {
  auto it = inputs.find(role);
  if (it == inputs.end() || it->second.empty()) {
    throw Error(ErrorKind::IoError, "manifest: missing input '" + role + "'");
  }
  return it->second.front();
}

json to_json(const RunManifest& m) {
  json j;
  j["schema_version"] = m.schema_version;
  j["app"] = m.app;
  j["inputs"] = m.inputs;
  j["config"] = {{"max_iters", m.solver.max_iters},
                 {"objective_tol", m.solver.objective_tol},
                 {"step_tol", m.solver.step_tol},
                 {"record_trace", m.solver.record_trace},
                 {"rng_seed", m.solver.rng_seed},
                 {"incremental", m.incremental}};
  j["seed"] = m.seed;
  j["out_dir"] = m.out_dir;
  if (!m.trace_path.empty()) j["trace_path"] = m.trace_path;
  return j;
}

RunManifest manifest_from_json(const json& j) {
  try {
    RunManifest m;
    m.schema_version = j.at("schema_version").get<int>();
    m.app = j.at("app").get<std::string>();
    m.inputs = j.at("inputs").get<std::map<std::string, std::vector<std::string>>>();
    const json& c = j.at("config");
    m.solver.max_iters = c.value("max_iters", m.solver.max_iters);
    m.solver.objective_tol = c.value("objective_tol", m.solver.objective_tol);
    m.solver.step_tol = c.value("step_tol", m.solver.step_tol);
    m.solver.record_trace = c.value("record_trace", m.solver.record_trace);
    m.solver.rng_seed = c.value("rng_seed", m.solver.rng_seed);
    m.incremental = c.value("incremental", false);
    m.seed = j.value("seed", std::uint64_t{0});
    m.out_dir = j.value("out_dir", std::string("."));
    m.trace_path = j.value("trace_path", std::string());
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("manifest: ") + e.what());
  }
}

RunManifest read_manifest_file(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

void write_manifest_file(const fs::path& path, const RunManifest& m) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  f << to_json(m).dump(2) << '\n';
}

namespace {

std::vector<double> read_weights_file(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::vector<double> w;
  std::string tok;
  while (f >> tok) {
    try {
      w.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw Error(ErrorKind::IoError, path.string() + ": bad weight '" + tok + "'");
    }
  }
  return w;
}

struct Solved {
  Matrix result;
  IterateTrace trace;
  std::optional<double> phi_star;
  double residual = 0.0;
  json extra = json::object();
};

Solved solve_app(const RunManifest& m) {
  Solved s;
  if (m.app == "scale") {
    const ScalingProblem p(read_matrix_file(m.input("matrix")));
    auto r = solve_scaling(p, m.solver);
    s.result = scaled_matrix(p, r.factors);
    s.residual = std::max((s.result.rowwise().sum().array() - 1.0).abs().maxCoeff(),
                          (s.result.colwise().sum().array() - 1.0).abs().maxCoeff());
    s.extra["row_factors"] = std::vector<double>(r.factors.row.begin(), r.factors.row.end());
    s.extra["col_factors"] = std::vector<double>(r.factors.col.begin(), r.factors.col.end());
    s.trace = std::move(r.trace);
  } else if (m.app == "tyler") {
    const TylerProblem p(read_rows_file(m.input("samples")));
    SolverConfig cfg = m.solver;
    if (m.incremental) cfg.rng_seed = m.seed;
    auto r = m.incremental ? solve_tyler_incremental(p, cfg) : solve_tyler(p, cfg);
    s.result = r.scatter.mat();
    s.residual = tyler_fixed_point_residual(p, r.precision);
    s.trace = std::move(r.trace);
  } else if (m.app == "sqrt") {
    const SpdMatrix a = read_spd_file(m.input("matrix"));
    auto r = sqrt_via_sdiv(a, m.solver);
    s.result = r.point.mat();
    // the trace lives on the centred problem; its optimum is the centred root
    const Vector lambda = eig_sym(a.mat()).eigenvalues;
    const double c = 1.0 / std::sqrt(lambda.minCoeff() * lambda.maxCoeff());
    const SpdMatrix centred = SpdMatrix::symmetrized(c * a.mat());
    const BarycenterProblem bp = square_root_problem(centred);
    s.phi_star = barycenter_objective(bp, matrix_sqrt(centred));
    s.residual = (r.point.mat() * r.point.mat() - a.mat()).norm() / a.mat().norm();
    s.trace = std::move(r.trace);
  } else if (m.app == "barycenter") {
    std::vector<SpdMatrix> atoms;
    for (const auto& p : m.inputs.at("atoms")) atoms.push_back(read_spd_file(p));
    const BarycenterProblem p(std::move(atoms), read_weights_file(m.input("weights")));
    auto r = barycenter(p, m.solver);
    s.result = r.point.mat();
    s.residual = barycenter_residual(p, r.point);
    s.trace = std::move(r.trace);
  } else if (m.app == "bl") {
    const BlDatum datum = read_bl_datum_file(m.input("datum"));
    auto r = bl_constant(datum, m.solver);
    s.result = r.x_star.mat();
    s.residual = bl_stationarity_residual(datum, r.x_star);
    s.extra["F_star"] = r.f_star;
    s.extra["scale_invariant"] = datum.scale_invariant();
    s.trace = std::move(r.trace);
  } else {
    throw Error(ErrorKind::IoError, "unknown app '" + m.app + "'");
  }
  return s;
}

std::vector<ChartPanel> trace_chart(const std::string& app, const IterateTrace& t,
                                    std::optional<double> phi_star) {
  double ref = 0.0;
  std::string label;
  if (phi_star) {
    ref = *phi_star;
    label = "phi - phi*";
  } else {
    ref = std::numeric_limits<double>::infinity();
    for (const auto& r : t.records) ref = std::min(ref, r.phi);
    label = "phi - min phi";
  }
  Series by_iter{"cccp", {}, {}}, by_time{"cccp", {}, {}};
  for (const auto& r : t.records) {
    by_iter.x.push_back(static_cast<double>(r.k));
    by_iter.y.push_back(r.phi - ref);
    by_time.x.push_back(static_cast<double>(r.wall_ns) * 1e-6);
    by_time.y.push_back(r.phi - ref);
  }
  return {ChartPanel{app, "iteration", label, true, {by_iter}},
          ChartPanel{app, "wall time (ms)", label, true, {by_time}}};
}

}  // namespace

RunSummary run_manifest(const RunManifest& m) {
  m.validate();
  const fs::path out(m.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + out.string() + ": " + ec.message());

  Solved s = solve_app(m);

  RunSummary sum;
  sum.phi = s.trace.last().phi;
  sum.iterations = s.trace.iterations();
  sum.converged = s.trace.converged;
  sum.stop_reason = s.trace.stop_reason;
  sum.residual = s.residual;
  sum.extra = s.extra;
  sum.result_path = out / "result.txt";
  sum.trace_path = m.trace_path.empty() ? out / "trace.csv" : fs::path(m.trace_path);
  sum.svg_path = out / "trace.svg";

  write_manifest_file(out / "manifest.json", m);
  write_matrix_file(sum.result_path, s.result);
  write_trace_csv_file(sum.trace_path, s.trace);
  write_svg_file(sum.svg_path, trace_chart(m.app, s.trace, s.phi_star));

  json j = {{"app", m.app},
            {"phi", sum.phi},
            {"iterations", sum.iterations},
            {"oracle_calls", s.trace.oracle_calls},
            {"converged", sum.converged},
            {"stop_reason", sum.stop_reason},
            {"residual", sum.residual}};
  if (s.phi_star) j["phi_star"] = *s.phi_star;
  for (auto& [k, v] : s.extra.items()) j[k] = v;
  std::ofstream f(out / "summary.json");
  if (!f) throw Error(ErrorKind::IoError, "cannot write summary.json");
  f << j.dump(2) << '\n';
  return sum;
}

}  // namespace cccp
