#pragma once

// Run manifests: a JSON description of one solve (app, input files, solver
// config, seed, output directory). Every app subcommand writes one next to
// its outputs, and `run --manifest` replays it.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cccp/dcsolver.hpp"

namespace cccp {

struct RunManifest {
  static constexpr int kSchemaVersion = 1;

  int schema_version = kSchemaVersion;
  std::string app;  // scale | tyler | sqrt | barycenter | bl
  // role -> paths; barycenter uses "atoms" (several) and "weights"
  std::map<std::string, std::vector<std::string>> inputs;
  SolverConfig solver;
  bool incremental = false;  // tyler only
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string trace_path;  // empty: <out_dir>/trace.csv

  /// Schema, app id, required inputs, and that every input path exists.
  void validate() const;

  const std::string& input(const std::string& role) const;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);
RunManifest read_manifest_file(const std::filesystem::path& path);
void write_manifest_file(const std::filesystem::path& path, const RunManifest& m);

struct RunSummary {
  double phi = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string stop_reason;
  double residual = 0.0;
  std::filesystem::path result_path;
  std::filesystem::path trace_path;
  std::filesystem::path svg_path;
  nlohmann::json extra;  // app specific values (F* for bl, ...)
};

/// Solves, then writes manifest.json, result.txt, the trace CSV, trace.svg
/// and summary.json under out_dir. Module errors propagate.
RunSummary run_manifest(const RunManifest& m);

}  // namespace cccp
