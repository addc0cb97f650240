#include "cccp/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "cccp/bench.hpp"
#include "cccp/dcrep.hpp"
#include "cccp/diagnostics.hpp"
#include "cccp/generate.hpp"
#include "cccp/manifest.hpp"
#include "cccp/matrix_io.hpp"

namespace cccp {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  f << text;
}

std::vector<int> parse_int_list(const std::string& s) {
  // "4,16,64" or "2..6"
  std::vector<int> out;
  try {
    if (auto dots = s.find(".."); dots != std::string::npos) {
      const int lo = std::stoi(s.substr(0, dots)), hi = std::stoi(s.substr(dots + 2));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
      return out;
    }
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) out.push_back(std::stoi(tok));
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("bad integer list '" + s + "'");
  }
  if (out.empty()) throw CLI::ValidationError("empty integer list '" + s + "'");
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

}  // namespace

std::vector<fs::path> generate_files(const GenerateOptions& opt, const fs::path& dir) {
  if (opt.dim < 1) throw Error(ErrorKind::DomainError, "generate: dim must be >= 1");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string());
  Rng rng(opt.seed);
  std::vector<fs::path> paths;
  auto emit_matrix = [&](const std::string& name, const Matrix& m) {
    paths.push_back(dir / name);
    write_matrix_file(paths.back(), m);
  };
  auto emit_datum = [&](const BlDatum& d) {
    paths.push_back(dir / "datum.txt");
    std::ofstream f(paths.back());
    if (!f) throw Error(ErrorKind::IoError, "cannot write " + paths.back().string());
    write_bl_datum(f, d);
  };
  const int k = opt.k > 0 ? opt.k : std::max(1, opt.dim / 4);
  if (opt.kind == "spd") {
    emit_matrix("spd.txt", random_spd(opt.dim, opt.cond, rng).mat());
  } else if (opt.kind == "positive") {
    emit_matrix("positive.txt", random_positive_matrix(opt.dim, rng));
  } else if (opt.kind == "tyler") {
    const int n = opt.n > 0 ? opt.n : 20 * opt.dim;
    const SpdMatrix scatter = random_spd(opt.dim, opt.cond, rng);
    paths.push_back(dir / "samples.txt");
    std::ofstream f(paths.back());
    if (!f) throw Error(ErrorKind::IoError, "cannot write " + paths.back().string());
    write_rows(f, elliptical_samples(n, scatter, rng));
  } else if (opt.kind == "bl") {
    emit_datum(geometric_bl_datum(opt.dim, k, rng));
  } else if (opt.kind == "coordinate") {
    emit_datum(coordinate_bl_datum(opt.dim));
  } else if (opt.kind == "holder") {
    emit_datum(holder_bl_datum(opt.dim, {0.5, 0.5}));
  } else if (opt.kind == "barycenter") {
    const int n = opt.n > 0 ? opt.n : 3;
    fs::create_directories(dir / "atoms");
    for (int i = 0; i < n; ++i) {
      emit_matrix("atoms/atom_" + std::to_string(i) + ".txt",
                  random_spd(opt.dim, opt.cond, rng).mat());
    }
    const auto w = random_simplex_weights(static_cast<std::size_t>(n), rng);
    std::string text;
    for (double v : w) text += format_double(v) + "\n";
    paths.push_back(dir / "weights.txt");
    write_text(paths.back(), text);
  } else {
    throw Error(ErrorKind::DomainError, "generate: unknown kind '" + opt.kind + "'");
  }
  return paths;
}

std::vector<DcrepCheck> verify_dcrep(int dim_lo, int dim_hi, int trials, double tol,
                                     std::uint64_t seed) {
  if (dim_lo < 1 || dim_hi < dim_lo || trials < 1 || !(tol > 0)) {
    throw Error(ErrorKind::DomainError, "verify-dcrep: bad dims, trials or tol");
  }
  std::vector<DcrepCheck> out;

  DcrepCheck scalar{"scalar (log x)^2", 0, 0, 0.0};
  for (double x : {0.1, 0.5, 2.0, 10.0, 100.0}) {
    const double err = std::abs(sqlog_by_quadrature(x) - std::pow(std::log(x), 2));
    ++scalar.cases;
    scalar.worst = std::max(scalar.worst, err);
    if (err > 1e-8) ++scalar.failures;
  }
  out.push_back(scalar);

  Rng rng(seed);
  const int span = dim_hi - dim_lo + 1;
  DcrepCheck matrix{"matrix d_R^2 integral", 0, 0, 0.0};
  DcrepCheck convex{"midpoint convexity f_t, h_t", 0, 0, 0.0};
  std::uniform_real_distribution<double> logt(-4.0, 4.0);
  for (int i = 0; i < trials; ++i) {
    const int d = dim_lo + i % span;
    const SpdMatrix x = random_spd(d, 1e2, rng), y = random_spd(d, 1e2, rng);
    const double exact = std::pow(riemannian_distance(x, y), 2);
    const double err = std::abs(dc_distance_squared(x, y) - exact);
    ++matrix.cases;
    // report relative to the allowed band so `worst` reads as a ratio
    matrix.worst = std::max(matrix.worst, err / std::max(1e-7, tol * exact));
    if (err > std::max(1e-7, tol * exact)) ++matrix.failures;

    const SpdMatrix x2 = random_spd(d, 1e2, rng), y2 = random_spd(d, 1e2, rng);
    const SpdMatrix xm = SpdMatrix::symmetrized(0.5 * (x.mat() + x2.mat()));
    const SpdMatrix ym = SpdMatrix::symmetrized(0.5 * (y.mat() + y2.mat()));
    const double t = std::pow(10.0, logt(rng));
    const DcParts a = dc_distance_parts(x, y, t), b = dc_distance_parts(x2, y2, t),
                  m = dc_distance_parts(xm, ym, t);
    const double vf = m.f - 0.5 * (a.f + b.f), vh = m.h - 0.5 * (a.h + b.h);
    ++convex.cases;
    convex.worst = std::max({convex.worst, vf, vh});
    if (vf > 1e-10 || vh > 1e-10) ++convex.failures;
  }
  out.push_back(matrix);
  out.push_back(convex);
  return out;
}

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string out = "out";
  int jobs = 1;
  double tol = -1;  // unset
  int max_iters = -1;
  std::string trace;
  bool json_errors = false;
};

RunManifest base_manifest(const Globals& g, const std::string& app) {
  RunManifest m;
  m.app = app;
  m.seed = g.seed;
  m.out_dir = g.out;
  m.trace_path = g.trace;
  if (g.tol > 0) {
    m.solver.step_tol = g.tol;
    m.solver.objective_tol = g.tol;
  }
  if (g.max_iters > 0) m.solver.max_iters = g.max_iters;
  m.solver.rng_seed = g.seed;
  return m;
}

void report(std::ostream& out, const RunSummary& s) {
  out << "phi " << format_double(s.phi) << "\n"
      << "iterations " << s.iterations << " (" << s.stop_reason << ")\n"
      << "residual " << format_double(s.residual) << "\n";
  if (s.extra.contains("F_star")) out << "F* " << format_double(s.extra["F_star"].get<double>()) << "\n";
  out << "result " << s.result_path.string() << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"CCCP solvers on the positive definite cone"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "seed for generators and incremental sampling");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--jobs", g.jobs, "worker threads for bench")->check(CLI::PositiveNumber);
  app.add_option("--tol", g.tol, "step and objective tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iters", g.max_iters, "iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--trace", g.trace, "trace CSV path (default <out>/trace.csv)");
  app.add_flag("--json-errors", g.json_errors, "errors as JSON on stderr");

  std::string matrix_path, samples_path, weights_path, datum_path, batch_dir, manifest_path;
  std::vector<std::string> atoms;
  bool incremental = false;

  auto* scale = app.add_subcommand("scale", "Sinkhorn scaling of a positive matrix");
  scale->add_option("--matrix", matrix_path, "positive square matrix file")->required()->check(CLI::ExistingFile);

  auto* tyler = app.add_subcommand("tyler", "Tyler's M-estimator from samples");
  tyler->add_option("--samples", samples_path, "n rows of d values")->required()->check(CLI::ExistingFile);
  tyler->add_flag("--incremental", incremental, "use the incremental finite-sum solver");

  auto* sqrt_cmd = app.add_subcommand("sqrt", "matrix square root via S-divergence");
  sqrt_cmd->add_option("--matrix", matrix_path, "PD matrix file")->required()->check(CLI::ExistingFile);

  auto* bary = app.add_subcommand("barycenter", "S-divergence barycenter");
  bary->add_option("--atoms", atoms, "atom files, or one directory of .txt files")->required();
  bary->add_option("--weights", weights_path, "weights file")->required()->check(CLI::ExistingFile);

  auto* bl = app.add_subcommand("bl", "Brascamp-Lieb constant");
  auto* datum_opt = bl->add_option("--datum", datum_path, "BL datum file")->check(CLI::ExistingFile);
  auto* batch_opt = bl->add_option("--batch", batch_dir, "directory of datum files")->check(CLI::ExistingDirectory);
  datum_opt->excludes(batch_opt);

  auto* bench = app.add_subcommand("bench", "CCCP vs RGD benchmark grid");
  std::string bench_apps = "sqrt,bl", bench_dims = "4,16,64", bench_solvers = "cccp,rgd-fixed,rgd-bt";
  int bench_seeds = 1;
  bench->add_option("--app", bench_apps, "sqrt,bl");
  bench->add_option("--dims", bench_dims, "e.g. 4,16,64");
  bench->add_option("--solvers", bench_solvers, "cccp,rgd-fixed,rgd-bt");
  bench->add_option("--seeds", bench_seeds, "instances per cell")->check(CLI::PositiveNumber);

  auto* dcrep = app.add_subcommand("verify-dcrep", "check the integral identities");
  std::string dcrep_dims = "2..6";
  int dcrep_trials = 50;
  double dcrep_tol = 1e-6;
  dcrep->add_option("--dims", dcrep_dims, "range lo..hi");
  dcrep->add_option("--trials", dcrep_trials, "random pairs")->check(CLI::PositiveNumber);
  dcrep->add_option("--tol", dcrep_tol, "relative tolerance")->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("generate", "write a seeded random instance");
  GenerateOptions gopt;
  gen->add_option("--kind", gopt.kind, "spd|positive|tyler|bl|barycenter|holder|coordinate")
      ->required()
      ->check(CLI::IsMember({"spd", "positive", "tyler", "bl", "barycenter", "holder", "coordinate"}));
  gen->add_option("--dim", gopt.dim, "dimension")->check(CLI::PositiveNumber);
  gen->add_option("--n", gopt.n, "samples (tyler) or atoms (barycenter)");
  gen->add_option("--k", gopt.k, "BL block width");
  gen->add_option("--cond", gopt.cond, "condition number of PD draws")->check(CLI::Range(1.0, 1e15));

  auto* run = app.add_subcommand("run", "replay a manifest.json");
  run->add_option("--manifest", manifest_path, "manifest file")->required()->check(CLI::ExistingFile);

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // flags are not bound yet when parsing fails
    const bool json = std::any_of(argv + 1, argv + argc,
                                  [](const char* a) { return std::string(a) == "--json-errors"; });
    if (json && e.get_exit_code() != 0) {
      err << nlohmann::json{{"error", "Usage"}, {"message", e.what()}}.dump() << "\n";
      return 2;
    }
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  auto fail = [&](const std::string& kind, const std::string& msg) {
    if (g.json_errors) {
      err << nlohmann::json{{"error", kind}, {"message", msg}}.dump() << "\n";
    } else {
      err << "error: " << msg << "\n";
    }
  };

  WarningHandler previous = set_warning_handler([&err, &g](std::string_view msg) {
    if (g.json_errors) {
      err << nlohmann::json{{"warning", std::string(msg)}}.dump() << "\n";
    } else {
      err << "warning: " << msg << "\n";
    }
  });
  struct Restore {
    WarningHandler h;
    ~Restore() { set_warning_handler(std::move(h)); }
  } restore{std::move(previous)};

  try {
    if (scale->parsed()) {
      auto m = base_manifest(g, "scale");
      m.inputs["matrix"] = {matrix_path};
      report(out, run_manifest(m));
    } else if (tyler->parsed()) {
      auto m = base_manifest(g, "tyler");
      m.inputs["samples"] = {samples_path};
      m.incremental = incremental;
      report(out, run_manifest(m));
    } else if (sqrt_cmd->parsed()) {
      auto m = base_manifest(g, "sqrt");
      m.inputs["matrix"] = {matrix_path};
      report(out, run_manifest(m));
    } else if (bary->parsed()) {
      auto m = base_manifest(g, "barycenter");
      std::vector<std::string> files;
      for (const auto& a : atoms) {
        if (fs::is_directory(a)) {
          std::vector<std::string> found;
          for (const auto& e : fs::directory_iterator(a)) {
            if (e.path().extension() == ".txt") found.push_back(e.path().string());
          }
          std::sort(found.begin(), found.end());
          files.insert(files.end(), found.begin(), found.end());
        } else {
          files.push_back(a);
        }
      }
      m.inputs["atoms"] = files;
      m.inputs["weights"] = {weights_path};
      report(out, run_manifest(m));
    } else if (bl->parsed()) {
      if (datum_path.empty() && batch_dir.empty()) {
        fail("Usage", "bl: one of --datum or --batch is required");
        return 2;
      }
      if (!datum_path.empty()) {
        auto m = base_manifest(g, "bl");
        m.inputs["datum"] = {datum_path};
        report(out, run_manifest(m));
      } else {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(batch_dir)) {
          if (e.is_regular_file()) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        out << "datum,F_star,iterations,residual\n";
        for (const auto& f : files) {
          auto m = base_manifest(g, "bl");
          m.inputs["datum"] = {f.string()};
          m.out_dir = (fs::path(g.out) / f.stem()).string();
          m.trace_path.clear();
          const RunSummary s = run_manifest(m);
          out << f.filename().string() << ',' << format_double(s.extra["F_star"].get<double>())
              << ',' << s.iterations << ',' << format_double(s.residual) << '\n';
        }
      }
    } else if (bench->parsed()) {
      BenchConfig bc;
      bc.apps = split_commas(bench_apps);
      bc.dims = parse_int_list(bench_dims);
      bc.solvers = split_commas(bench_solvers);
      bc.seeds = bench_seeds;
      bc.base_seed = g.seed;
      bc.jobs = g.jobs;
      if (g.max_iters > 0) bc.max_iters = g.max_iters;
      if (g.tol > 0) bc.tol = g.tol;
      bc.validate();
      const auto rows = run_bench(bc);
      const auto svgs = write_bench_outputs(g.out, rows);
      write_bench_csv(out, rows);
      for (const auto& p : svgs) out << "chart " << p.string() << "\n";
    } else if (dcrep->parsed()) {
      const auto dims = parse_int_list(dcrep_dims);
      const auto checks = verify_dcrep(dims.front(), dims.back(), dcrep_trials, dcrep_tol, g.seed);
      char line[160];
      std::snprintf(line, sizeof line, "%-30s %6s %9s %12s\n", "check", "cases", "failures", "worst");
      out << line;
      int failures = 0;
      for (const auto& c : checks) {
        std::snprintf(line, sizeof line, "%-30s %6d %9d %12.3e\n", c.name.c_str(), c.cases,
                      c.failures, c.worst);
        out << line;
        failures += c.failures;
      }
      if (failures > 0) {
        fail("VerificationFailure", std::to_string(failures) + " identity check(s) failed");
        return 3;
      }
    } else if (gen->parsed()) {
      gopt.seed = g.seed;
      for (const auto& p : generate_files(gopt, g.out)) out << p.string() << "\n";
    } else if (run->parsed()) {
      RunManifest m = read_manifest_file(manifest_path);
      report(out, run_manifest(m));
    }
  } catch (const CLI::ParseError& e) {
    fail("Usage", e.what());
    return 2;
  } catch (const Error& e) {
    fail(std::string(kind_name(e.kind())), e.what());
    return 1;
  } catch (const std::exception& e) {
    fail("Internal", e.what());
    return 1;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"cccp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cccp
