#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cccp/bench.hpp"
#include "cccp/cli.hpp"
#include "cccp/manifest.hpp"
#include "cccp/matrix_io.hpp"
#include "cccp/svg_chart.hpp"
#include "cccp/trace_csv.hpp"
#include "test_util.hpp"

using namespace cccp;
using namespace cccp::testing;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cccp_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int rc = run_cli(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return rc;
}

// trace CSV with the wall_ns column dropped
std::string without_wall(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, res;
  while (std::getline(in, line)) res += line.substr(0, line.rfind(',')) + "\n";
  return res;
}

double sdiv_scalar(double x, double a) { return std::log((x + a) / 2) - 0.5 * std::log(x) - 0.5 * std::log(a); }

}  // namespace

TEST(TraceCsv, RoundTrip) {
  IterateTrace tr;
  IterateRecord r0;
  r0.k = 0;
  r0.phi = 1.5;
  tr.records.push_back(r0);
  IterateRecord r1;
  r1.k = 1;
  r1.phi = 0.1 + 0.2;
  r1.surrogate = 1.0 / 3.0;
  r1.step_frob = 1e-300;
  r1.step_riem = 2.5;
  r1.wall_ns = 12345;
  tr.records.push_back(r1);
  std::stringstream ss;
  write_trace_csv(ss, tr);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), kTraceHeader);
  const IterateTrace back = read_trace_csv(ss);
  ASSERT_EQ(back.records.size(), 2u);
  EXPECT_EQ(back.records[1].phi, r1.phi);
  EXPECT_EQ(back.records[1].surrogate, r1.surrogate);
  EXPECT_EQ(back.records[1].step_frob, r1.step_frob);
  EXPECT_EQ(back.records[1].wall_ns, 12345);
  EXPECT_TRUE(std::isnan(back.records[0].surrogate));
}

TEST(Svg, WellFormed) {
  ChartPanel panel{"calls", "k", "gap", true, {{"cccp", {1, 2, 3}, {1, 1e-3, 1e-9}}, {"rgd", {1, 2}, {1, 0.5}}}};
  const std::string svg = render_svg({panel, panel});
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.find("<svg") != std::string::npos, true);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("cccp"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(Generate, DeterministicAndValid) {
  const fs::path a = fresh_dir("gen_a"), b = fresh_dir("gen_b");
  for (const std::string kind : {"spd", "positive", "tyler", "bl", "barycenter"}) {
    GenerateOptions opt;
    opt.kind = kind;
    opt.dim = 8;
    opt.seed = 11;
    const auto pa = generate_files(opt, a / kind), pb = generate_files(opt, b / kind);
    ASSERT_EQ(pa.size(), pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(slurp(pa[i]), slurp(pb[i])) << pa[i];
  }
  const SpdMatrix s = read_spd_file(a / "spd" / "spd.txt");
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.mat());
  EXPECT_NEAR(es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff(), 1e2, 1e-6);
  std::ifstream din(a / "bl" / "datum.txt");
  const BlDatum datum = read_bl_datum(din);
  Matrix agg = Matrix::Zero(8, 8);
  for (std::size_t i = 0; i < datum.maps().size(); ++i) {
    agg += datum.weights()[i] * datum.maps()[i] * datum.maps()[i].transpose();
  }
  EXPECT_LE((agg - Matrix::Identity(8, 8)).norm(), 1e-10);
}

TEST(Cli, SqrtRunAndRerun) {
  const fs::path dir = fresh_dir("sqrt");
  write_matrix_file(dir / "m.txt", diag({4, 9}));
  ASSERT_EQ(cli({"sqrt", "--matrix", (dir / "m.txt").string(), "--out", (dir / "a").string()}), 0);
  ASSERT_EQ(cli({"sqrt", "--matrix", (dir / "m.txt").string(), "--out", (dir / "b").string()}), 0);
  const Matrix x = read_matrix_file(dir / "a" / "result.txt");
  EXPECT_LE((x - diag({2, 3})).norm(), 1e-8);
  // the run works on M/6, whose root is diag(sqrt(2/3), sqrt(3/2))
  double phi_min = 0.0;
  for (double m : {4.0 / 6.0, 9.0 / 6.0}) phi_min += 0.5 * (sdiv_scalar(std::sqrt(m), 1) + sdiv_scalar(std::sqrt(m), m));
  std::ifstream tin(dir / "a" / "trace.csv");
  const IterateTrace tr = read_trace_csv(tin);
  EXPECT_NEAR(tr.records.back().phi, phi_min, 1e-10);
  EXPECT_EQ(without_wall(slurp(dir / "a" / "trace.csv")), without_wall(slurp(dir / "b" / "trace.csv")));
  EXPECT_EQ(slurp(dir / "a" / "result.txt"), slurp(dir / "b" / "result.txt"));
  EXPECT_TRUE(fs::exists(dir / "a" / "trace.svg"));
  // manifest replay reproduces the run
  ASSERT_EQ(cli({"run", "--manifest", (dir / "a" / "manifest.json").string(), "--out",
                 (dir / "c").string()}), 0);
  const auto m = read_manifest_file(dir / "a" / "manifest.json");
  EXPECT_EQ(m.app, "sqrt");
}

TEST(Cli, ErrorsAndExitCodes) {
  std::string out, err;
  EXPECT_EQ(cli({"sqrt", "--matrix", "/nonexistent.txt", "--json-errors"}, &out, &err), 2);
  const auto j = nlohmann::json::parse(err);
  EXPECT_TRUE(j.contains("error"));
  EXPECT_EQ(cli({"frobnicate"}, &out, &err), 2);
  const fs::path dir = fresh_dir("bad");
  std::ofstream(dir / "m.txt") << "2\n1 2\n2 1\n";  // indefinite
  EXPECT_EQ(cli({"sqrt", "--matrix", (dir / "m.txt").string(), "--json-errors"}, &out, &err), 1);
  EXPECT_EQ(nlohmann::json::parse(err)["error"], "CholeskyFailure");
}

TEST(Manifest, Validation) {
  RunManifest m;
  m.app = "sqrt";
  EXPECT_THROW(m.validate(), Error);  // no matrix input
  m.inputs["matrix"] = {"/nonexistent.txt"};
  EXPECT_THROW(m.validate(), Error);
  m.app = "nope";
  EXPECT_THROW(m.validate(), Error);
  nlohmann::json j = to_json(m);
  j["schema_version"] = 99;
  EXPECT_THROW(manifest_from_json(j).validate(), Error);
}

TEST(Bench, GridAndCsv) {
  BenchConfig cfg;
  cfg.dims = {4};
  cfg.seeds = 2;
  cfg.max_iters = 200;
  const auto rows = run_bench(cfg);
  EXPECT_EQ(rows.size(), 2u * 1u * 2u * 4u);  // apps x dims x seeds x solvers
  std::stringstream ss;
  write_bench_csv(ss, rows);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, kBenchHeader);
  int n = 0;
  while (std::getline(ss, line)) ++n;
  EXPECT_EQ(n, 16);
  const auto again = run_bench(cfg);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].phi, again[i].phi);
    EXPECT_EQ(rows[i].iters, again[i].iters);
  }
}
