#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "torsion/run.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 numerical-validation failure,
// 4 I/O error.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

struct CliOverrides {
  std::string config_path;
  std::string grid;
  std::string out_dir;
  double p = 0.0;
  double tol = 0.0;
};

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "configuration file (JSON)");
  cmd->add_option("--grid", o.grid, "grid size as NR,NT");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--p", o.p, "norm exponent for the bound report (> 2)");
  cmd->add_option("--tol", o.tol, "conformality / integrability tolerance");
}

torsion::RunConfig resolve_config(const CliOverrides& o) {
  torsion::RunConfig cfg;
  if (!o.config_path.empty()) cfg = torsion::load_config(o.config_path);
  if (!o.grid.empty()) {
    int nr = 0, nt = 0;
    if (std::sscanf(o.grid.c_str(), "%d,%d", &nr, &nt) != 2)
      throw torsion::ConfigError("--grid expects NR,NT");
    cfg.n_r = nr;
    cfg.n_theta = nt;
  }
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.p != 0.0) cfg.p = o.p;
  if (o.tol != 0.0) {
    cfg.conformality_tol = o.tol;
    cfg.integrability_tol = o.tol;
  }
  if (cfg.n_r < 2 || cfg.n_theta < 4 || cfg.n_theta % 2 != 0)
    throw torsion::ConfigError("grid: need n_r >= 2 and even n_theta >= 4");
  if (!(cfg.p > 2.0)) throw torsion::ConfigError("p must be > 2");
  return cfg;
}

int emit_report(const torsion::RunConfig& cfg, const torsion::RunReport& rep) {
  const std::string text = torsion::report_to_json(cfg, rep);
  std::cout << text;
  if (!cfg.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw torsion::IoError("cannot create output directory " + cfg.out_dir);
    const auto path = std::filesystem::path(cfg.out_dir) / "report.json";
    std::ofstream out(path);
    out << text;
    if (!out) throw torsion::IoError("cannot write " + path.string());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torsion: total torsion of normal sections on the disc"};
  app.require_subcommand(1);

  CliOverrides o;
  auto* analyze = app.add_subcommand("analyze", "sample immersion, compute torsions and residuals");
  auto* criticalize =
      app.add_subcommand("criticalize", "construct the critical section via the Neumann problem");
  auto* rh =
      app.add_subcommand("rh-solve", "recover the critical complex torsion via the RH problem");
  auto* example = app.add_subcommand("example", "list or emit builtin immersion specs");
  auto* verify = app.add_subcommand("verify", "run the invariant suite and print pass/fail");
  add_common_flags(analyze, o);
  add_common_flags(criticalize, o);
  add_common_flags(rh, o);

  std::string example_action = "list";
  std::string example_name;
  example->add_option("action", example_action, "list | emit")->check(CLI::IsMember({"list", "emit"}));
  example->add_option("name", example_name, "builtin name for emit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (analyze->parsed()) {
      const torsion::RunConfig cfg = resolve_config(o);
      return emit_report(cfg, torsion::run_analyze(cfg));
    }
    if (criticalize->parsed()) {
      const torsion::RunConfig cfg = resolve_config(o);
      return emit_report(cfg, torsion::run_criticalize(cfg));
    }
    if (rh->parsed()) {
      const torsion::RunConfig cfg = resolve_config(o);
      return emit_report(cfg, torsion::run_rh_solve(cfg));
    }

    if (example->parsed()) {
      if (example_action == "list") {
        for (const auto& name : torsion::builtin_names()) std::cout << name << "\n";
        return kExitOk;
      }
      torsion::RunConfig cfg;
      cfg.builtin = example_name.empty() ? "w2" : example_name;
      const torsion::HolomorphicGraphSpec spec = torsion::builtin_spec(cfg);
      std::cout << "{\n  \"immersion\": {\"builtin\": \"poly\", \"coefficients\": [";
      for (Eigen::Index k = 0; k < spec.coefficients.size(); ++k) {
        if (k) std::cout << ", ";
        std::cout << "[" << spec.coefficients[k].real() << ", " << spec.coefficients[k].imag()
                  << "]";
      }
      std::cout << "]},\n  \"grid\": {\"n_r\": 64, \"n_theta\": 128}\n}\n";
      return kExitOk;
    }

    if (verify->parsed()) {
      bool all_pass = true;
      for (const auto& res : torsion::run_verification()) {
        std::cout << (res.pass ? "[PASS] " : "[FAIL] ") << res.name << ": " << res.detail << "\n";
        all_pass = all_pass && res.pass;
      }
      return all_pass ? kExitOk : kExitValidation;
    }
  } catch (const torsion::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const torsion::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const torsion::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
