#pragma once

// Command-line front end. The tools/ binary is a thin main() over run_cli so
// the whole surface can be driven from tests.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cccp {

/// Exit codes: 0 success, 1 module or I/O error, 2 bad usage, 3 a
/// verification check failed.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct GenerateOptions {
  std::string kind;  // spd | positive | tyler | bl | barycenter | holder | coordinate
  int dim = 4;
  int n = 0;          // samples (tyler, default 20 dim) or atoms (barycenter, default 3)
  int k = 0;          // BL block width, default max(1, dim/4)
  double cond = 1e2;  // spd spectra
  std::uint64_t seed = 0;
};

/// Writes the instance files for `opt` into `dir` and returns their paths.
std::vector<std::filesystem::path> generate_files(const GenerateOptions& opt,
                                                  const std::filesystem::path& dir);

struct DcrepCheck {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  // largest error seen (or largest convexity violation)
};

/// Scalar identity at fixed points, the matrix identity on random pairs and
/// midpoint convexity of f_t, h_t.
std::vector<DcrepCheck> verify_dcrep(int dim_lo, int dim_hi, int trials, double tol,
                                     std::uint64_t seed);

}  // namespace cccp
