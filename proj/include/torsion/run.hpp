#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "torsion/critical.hpp"
#include "torsion/graphs.hpp"
#include "torsion/vekua.hpp"

namespace torsion {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Batch-run configuration; loaded from a JSON file, overridable from the
// command line.
struct RunConfig {
  std::string builtin = "plane";  // plane | w | w2 | w3 | w2+w | wn | poly
  int monomial_degree = 2;        // for "wn"
  Complex scale{1.0, 0.0};        // for "wn"
  std::vector<Complex> coefficients;  // for "poly"
  std::string sample_file;        // sampled-immersion input; overrides builtin

  int n_r = 64;
  int n_theta = 128;

  double conformality_tol = 1e-8;
  double integrability_tol = 1e-8;
  double report_tol = 1e-6;
  double p = std::numeric_limits<double>::infinity();

  std::string out_dir = "out";
  bool write_fields = true;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_json(const std::string& text);

struct RunReport {
  ConformalityReport conformality;
  double total_torsion_before = 0.0;
  double total_torsion_after = 0.0;
  CriticalityReport before;
  CriticalityReport after;
  double minimality_gap = 0.0;
  BoundReport bound;
  double pde_rh_discrepancy = 0.0;
  double rh_boundary_residual = 0.0;
  double cr_residual_norm = 0.0;
  std::map<std::string, std::string> field_files;
};

std::string report_to_json(const RunConfig& cfg, const RunReport& rep);

RunReport run_analyze(const RunConfig& cfg);
RunReport run_criticalize(const RunConfig& cfg);
RunReport run_rh_solve(const RunConfig& cfg);

// Builtin catalog.
std::vector<std::string> builtin_names();
HolomorphicGraphSpec builtin_spec(const RunConfig& cfg);

// Sampled-immersion files: grid shape in the header, then one row per node
// in grid order (interior rings first, boundary ring last) with 4 position
// and 8 derivative columns.
void write_immersion_samples(const std::string& path, const ImmersionSample& sample,
                             const DiscGrid& grid);
ImmersionSample read_immersion_samples(const std::string& path, DiscGrid& grid);

void write_scalar_field(const std::string& path, const DiscGrid& grid, const ScalarField& f);
void write_complex_field(const std::string& path, const DiscGrid& grid, const ComplexField& f);

struct VerifyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};
std::vector<VerifyResult> run_verification();

}  // namespace torsion
