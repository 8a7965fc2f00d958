#include "torsion/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace torsion {

namespace {

using json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

Complex parse_complex(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) return Complex(j[0].get<double>(), j[1].get<double>());
  throw ConfigError("complex values must be numbers or [re, im] pairs");
}

double parse_p(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw ConfigError("p must be a number > 2 or \"inf\"");
  }
  return j.get<double>();
}

ImmersionSample make_sample(const RunConfig& cfg, DiscGrid& grid) {
  if (!cfg.sample_file.empty()) return read_immersion_samples(cfg.sample_file, grid);
  grid = build_grid(cfg.n_r, cfg.n_theta);
  return sample_immersion(graph_immersion(builtin_spec(cfg)), grid);
}

ConformalityReport require_conformal(const ImmersionSample& sample, const RunConfig& cfg) {
  ConformalityReport rep = check_conformality(sample, cfg.conformality_tol);
  if (!rep.pass) {
    std::ostringstream msg;
    msg << "conformality check failed: |g11-g22|/W = " << rep.max_conformal_residual
        << ", |g12|/W = " << rep.max_skew_residual << ", min W = " << rep.min_w;
    throw ValidationError(msg.str());
  }
  return rep;
}

std::string field_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / (name + ".csv")).string();
}

void ensure_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir);
}

json criticality_json(const CriticalityReport& r) {
  return json{{"interior_residual", r.interior_residual},
              {"boundary_residual", r.boundary_residual},
              {"gauss_defect", r.gauss_defect}};
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  RunConfig cfg;
  try {
    if (j.contains("immersion")) {
      const json& im = j["immersion"];
      if (im.contains("file")) {
        cfg.sample_file = im["file"].get<std::string>();
      } else {
        cfg.builtin = im.value("builtin", cfg.builtin);
        if (im.contains("n")) cfg.monomial_degree = im["n"].get<int>();
        if (im.contains("scale")) cfg.scale = parse_complex(im["scale"]);
        if (im.contains("coefficients"))
          for (const auto& c : im["coefficients"]) cfg.coefficients.push_back(parse_complex(c));
      }
    }
    if (j.contains("grid")) {
      cfg.n_r = j["grid"].value("n_r", cfg.n_r);
      cfg.n_theta = j["grid"].value("n_theta", cfg.n_theta);
    }
    if (j.contains("tolerances")) {
      const json& t = j["tolerances"];
      cfg.conformality_tol = t.value("conformality", cfg.conformality_tol);
      cfg.integrability_tol = t.value("integrability", cfg.integrability_tol);
      cfg.report_tol = t.value("report", cfg.report_tol);
    }
    if (j.contains("p")) cfg.p = parse_p(j["p"]);
    if (j.contains("output")) {
      cfg.out_dir = j["output"].value("dir", cfg.out_dir);
      cfg.write_fields = j["output"].value("write_fields", cfg.write_fields);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  if (cfg.n_r < 2 || cfg.n_theta < 4 || cfg.n_theta % 2 != 0)
    throw ConfigError("grid: need n_r >= 2 and even n_theta >= 4");
  if (!(cfg.p > 2.0)) throw ConfigError("p must be > 2");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::vector<std::string> builtin_names() {
  return {"plane", "w", "w2", "w3", "w2+w", "wn", "poly"};
}

HolomorphicGraphSpec builtin_spec(const RunConfig& cfg) {
  if (cfg.builtin == "plane") return plane_spec();
  if (cfg.builtin == "w") return monomial_spec(1);
  if (cfg.builtin == "w2") return monomial_spec(2);
  if (cfg.builtin == "w3") return monomial_spec(3);
  if (cfg.builtin == "w2+w") {
    HolomorphicGraphSpec s;
    s.coefficients = Eigen::VectorXcd::Zero(3);
    s.coefficients[1] = Complex(1.0, 0.0);
    s.coefficients[2] = Complex(1.0, 0.0);
    return s;
  }
  if (cfg.builtin == "wn") return monomial_spec(cfg.monomial_degree, cfg.scale);
  if (cfg.builtin == "poly") {
    if (cfg.coefficients.empty()) throw ConfigError("poly builtin needs coefficients");
    HolomorphicGraphSpec s;
    s.coefficients =
        Eigen::Map<const Eigen::VectorXcd>(cfg.coefficients.data(), cfg.coefficients.size());
    return s;
  }
  throw ConfigError("unknown builtin immersion \"" + cfg.builtin + "\"");
}

std::string report_to_json(const RunConfig& cfg, const RunReport& rep) {
  json j;
  j["config"] = {{"builtin", cfg.sample_file.empty() ? cfg.builtin : std::string("<file>")},
                 {"n_r", cfg.n_r},
                 {"n_theta", cfg.n_theta}};
  j["conformality"] = {{"max_conformal_residual", rep.conformality.max_conformal_residual},
                       {"max_skew_residual", rep.conformality.max_skew_residual},
                       {"min_w", rep.conformality.min_w},
                       {"pass", rep.conformality.pass}};
  j["total_torsion"] = {{"before", rep.total_torsion_before}, {"after", rep.total_torsion_after}};
  j["criticality"] = {{"before", criticality_json(rep.before)},
                      {"after", criticality_json(rep.after)}};
  j["minimality_gap"] = rep.minimality_gap;
  j["bound"] = {{"sup_psi", rep.bound.sup_psi}, {"s_p", rep.bound.s_p}, {"ratio", rep.bound.ratio}};
  j["pde_rh_discrepancy"] = rep.pde_rh_discrepancy;
  j["rh_boundary_residual"] = rep.rh_boundary_residual;
  j["cr_residual_norm"] = rep.cr_residual_norm;
  j["fields"] = rep.field_files;
  return j.dump(2) + "\n";
}

RunReport run_analyze(const RunConfig& cfg) {
  DiscGrid grid;
  const ImmersionSample sample = make_sample(cfg, grid);

  RunReport rep;
  rep.conformality = require_conformal(sample, cfg);

  const NormalSection frame = build_normal_frame(sample);
  const TorsionField t = torsion_coefficients(frame, grid);
  const ScalarField s = normal_curvature(t, grid);

  rep.total_torsion_before = rep.total_torsion_after = total_torsion(t, grid);
  rep.before = rep.after = criticality_residual(t, grid);

  if (cfg.write_fields) {
    ensure_out_dir(cfg);
    write_scalar_field(field_path(cfg, "t11"), grid, t.T11);
    write_scalar_field(field_path(cfg, "t12"), grid, t.T12);
    write_scalar_field(field_path(cfg, "curvature"), grid, s);
    rep.field_files = {{"t11", field_path(cfg, "t11")},
                       {"t12", field_path(cfg, "t12")},
                       {"curvature", field_path(cfg, "curvature")}};
  }
  return rep;
}

RunReport run_criticalize(const RunConfig& cfg) {
  DiscGrid grid;
  const ImmersionSample sample = make_sample(cfg, grid);

  RunReport rep;
  rep.conformality = require_conformal(sample, cfg);

  const NormalSection frame = build_normal_frame(sample);
  const TorsionField t = torsion_coefficients(frame, grid);
  rep.total_torsion_before = total_torsion(t, grid);
  rep.before = criticality_residual(t, grid);

  const CriticalizeResult crit = criticalize_torsion(t, grid, cfg.integrability_tol);
  rep.total_torsion_after = total_torsion(crit.torsion, grid);
  rep.after = crit.report;
  rep.minimality_gap = minimality_gap(crit.angle, grid);

  if (cfg.write_fields) {
    ensure_out_dir(cfg);
    write_scalar_field(field_path(cfg, "phi"), grid, crit.angle.phi);
    write_scalar_field(field_path(cfg, "t11_critical"), grid, crit.torsion.T11);
    write_scalar_field(field_path(cfg, "t12_critical"), grid, crit.torsion.T12);
    rep.field_files = {{"phi", field_path(cfg, "phi")},
                       {"t11_critical", field_path(cfg, "t11_critical")},
                       {"t12_critical", field_path(cfg, "t12_critical")}};
  }
  return rep;
}

RunReport run_rh_solve(const RunConfig& cfg) {
  DiscGrid grid;
  const ImmersionSample sample = make_sample(cfg, grid);

  RunReport rep;
  rep.conformality = require_conformal(sample, cfg);

  const NormalSection frame = build_normal_frame(sample);
  const TorsionField t = torsion_coefficients(frame, grid);
  rep.total_torsion_before = total_torsion(t, grid);
  rep.before = criticality_residual(t, grid);

  const CriticalizeResult crit = criticalize_torsion(t, grid, cfg.integrability_tol);
  rep.after = crit.report;
  rep.total_torsion_after = total_torsion(crit.torsion, grid);

  const ScalarField s = normal_curvature(crit.torsion, grid);
  const ComplexTorsion psi_rh = rh_solve(s, grid);
  const ComplexTorsion psi_pde = complex_torsion(crit.torsion);

  double disc = (psi_rh.psi.interior - psi_pde.psi.interior).array().abs().maxCoeff();
  disc = std::max(disc, (psi_rh.psi.boundary - psi_pde.psi.boundary).array().abs().maxCoeff());
  rep.pde_rh_discrepancy = disc;
  rep.rh_boundary_residual = rh_boundary_residual(psi_rh, grid).abs().maxCoeff();
  rep.cr_residual_norm = cr_residual(psi_rh, s, grid).interior.array().abs().maxCoeff();
  rep.bound = sup_bound_report(psi_rh, s, cfg.p, grid);

  if (cfg.write_fields) {
    ensure_out_dir(cfg);
    write_complex_field(field_path(cfg, "psi_rh"), grid, psi_rh.psi);
    write_complex_field(field_path(cfg, "psi_pde"), grid, psi_pde.psi);
    rep.field_files = {{"psi_rh", field_path(cfg, "psi_rh")},
                       {"psi_pde", field_path(cfg, "psi_pde")}};
  }
  return rep;
}

namespace {

void write_table(const std::string& path, const DiscGrid& grid, const std::string& header,
                 const std::function<void(std::ostream&, int)>& interior_row,
                 const std::function<void(std::ostream&, int)>& boundary_row) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.precision(17);
  out << "# n_r=" << grid.n_r << ",n_theta=" << grid.n_theta
      << " (boundary ring written as j=" << grid.n_r + 1 << ")\n";
  out << header << "\n";
  for (int j = 0; j < grid.n_r; ++j)
    for (int k = 0; k < grid.n_theta; ++k) {
      const int i = grid.index(j, k);
      out << j + 1 << "," << k << "," << grid.u[i] << "," << grid.v[i] << ",";
      interior_row(out, i);
      out << "\n";
    }
  for (int k = 0; k < grid.n_theta; ++k) {
    out << grid.n_r + 1 << "," << k << "," << grid.bu[k] << "," << grid.bv[k] << ",";
    boundary_row(out, k);
    out << "\n";
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace

void write_scalar_field(const std::string& path, const DiscGrid& grid, const ScalarField& f) {
  const bool traced = f.has_boundary();
  write_table(
      path, grid, "j,k,u,v,value",
      [&](std::ostream& o, int i) { o << f.interior[i]; },
      [&](std::ostream& o, int k) { o << (traced ? f.boundary[k] : 0.0); });
}

void write_complex_field(const std::string& path, const DiscGrid& grid, const ComplexField& f) {
  const bool traced = f.has_boundary();
  write_table(
      path, grid, "j,k,u,v,re,im",
      [&](std::ostream& o, int i) { o << f.interior[i].real() << "," << f.interior[i].imag(); },
      [&](std::ostream& o, int k) {
        const Complex val = traced ? f.boundary[k] : Complex(0.0, 0.0);
        o << val.real() << "," << val.imag();
      });
}

void write_immersion_samples(const std::string& path, const ImmersionSample& sample,
                             const DiscGrid& grid) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.precision(17);
  out << "n_r=" << grid.n_r << ",n_theta=" << grid.n_theta << "\n";
  out << "x1,x2,x3,x4,xu1,xu2,xu3,xu4,xv1,xv2,xv3,xv4\n";
  auto row = [&](const Eigen::Matrix<double, Eigen::Dynamic, 4>& x,
                 const Eigen::Matrix<double, Eigen::Dynamic, 4>& xu,
                 const Eigen::Matrix<double, Eigen::Dynamic, 4>& xv, int i) {
    for (int c = 0; c < 4; ++c) out << x(i, c) << ",";
    for (int c = 0; c < 4; ++c) out << xu(i, c) << ",";
    for (int c = 0; c < 4; ++c) out << xv(i, c) << (c == 3 ? "" : ",");
    out << "\n";
  };
  for (int i = 0; i < grid.num_interior(); ++i)
    row(sample.X.interior, sample.Xu.interior, sample.Xv.interior, i);
  for (int k = 0; k < grid.n_theta; ++k)
    row(sample.X.boundary, sample.Xu.boundary, sample.Xv.boundary, k);
  if (!out) throw IoError("write failed for " + path);
}

ImmersionSample read_immersion_samples(const std::string& path, DiscGrid& grid) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sample file " + path);

  std::string line;
  if (!std::getline(in, line)) throw ConfigError("sample file: missing header");
  int n_r = 0, n_theta = 0;
  if (std::sscanf(line.c_str(), "n_r=%d,n_theta=%d", &n_r, &n_theta) != 2)
    throw ConfigError("sample file: header must declare n_r=..,n_theta=..");
  grid = build_grid(n_r, n_theta);

  std::getline(in, line);  // column header

  ImmersionSample s;
  const int n = grid.num_interior();
  s.X.interior.resize(n, 4);
  s.Xu.interior.resize(n, 4);
  s.Xv.interior.resize(n, 4);
  s.X.boundary.resize(n_theta, 4);
  s.Xu.boundary.resize(n_theta, 4);
  s.Xv.boundary.resize(n_theta, 4);

  auto read_row = [&](Eigen::Matrix<double, Eigen::Dynamic, 4>& x,
                      Eigen::Matrix<double, Eigen::Dynamic, 4>& xu,
                      Eigen::Matrix<double, Eigen::Dynamic, 4>& xv, int i) {
    if (!std::getline(in, line)) throw ConfigError("sample file: too few rows for declared grid");
    std::stringstream ss(line);
    double vals[12];
    for (int c = 0; c < 12; ++c) {
      std::string cell;
      if (!std::getline(ss, cell, ',')) throw ConfigError("sample file: short row");
      vals[c] = std::stod(cell);
    }
    for (int c = 0; c < 4; ++c) x(i, c) = vals[c];
    for (int c = 0; c < 4; ++c) xu(i, c) = vals[4 + c];
    for (int c = 0; c < 4; ++c) xv(i, c) = vals[8 + c];
  };
  for (int i = 0; i < n; ++i) read_row(s.X.interior, s.Xu.interior, s.Xv.interior, i);
  for (int k = 0; k < n_theta; ++k) read_row(s.X.boundary, s.Xu.boundary, s.Xv.boundary, k);

  auto dot = [](const Eigen::Matrix<double, Eigen::Dynamic, 4>& a,
                const Eigen::Matrix<double, Eigen::Dynamic, 4>& b) {
    return Eigen::VectorXd((a.array() * b.array()).rowwise().sum().matrix());
  };
  s.g11.interior = dot(s.Xu.interior, s.Xu.interior);
  s.g12.interior = dot(s.Xu.interior, s.Xv.interior);
  s.g22.interior = dot(s.Xv.interior, s.Xv.interior);
  s.g11.boundary = dot(s.Xu.boundary, s.Xu.boundary);
  s.g12.boundary = dot(s.Xu.boundary, s.Xv.boundary);
  s.g22.boundary = dot(s.Xv.boundary, s.Xv.boundary);
  s.W.interior = 0.5 * (s.g11.interior + s.g22.interior);
  s.W.boundary = 0.5 * (s.g11.boundary + s.g22.boundary);
  return s;
}

std::vector<VerifyResult> run_verification() {
  std::vector<VerifyResult> results;
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    results.push_back({name, pass, detail});
  };
  // An order check is meaningless once the defect sits at machine precision.
  auto order_ok = [](double coarse, double fine) {
    return fine < 1e-12 || std::log2(coarse / fine) >= 1.8;
  };
  auto order_detail = [](double coarse, double fine) {
    if (fine < 1e-12) return "defect " + std::to_string(fine) + " at machine precision";
    return "observed order " + std::to_string(std::log2(coarse / fine));
  };

  const DiscGrid coarse = build_grid(24, 48);
  const DiscGrid fine = build_grid(48, 96);

  {  // Discrete divergence theorem under refinement.
    auto defect = [](const DiscGrid& g) {
      ScalarField p = sample_scalar(g, [](double u, double v) { return std::sin(u) * v; });
      ScalarField q = sample_scalar(g, [](double u, double v) { return std::exp(u) * std::cos(v); });
      const ScalarField pu = differentiate(g, p, Dir::U);
      const ScalarField qv = differentiate(g, q, Dir::V);
      const double area = integrate_area(g, Eigen::ArrayXd(pu.interior + qv.interior));
      const double bdry =
          integrate_boundary(g, p.boundary.array() * g.bu + q.boundary.array() * g.bv);
      return std::abs(area - bdry);
    };
    const double ec = defect(coarse), ef = defect(fine);
    add("divergence_theorem", order_ok(ec, ef), order_detail(ec, ef));
  }

  {  // S is invariant under section rotation.
    auto deviation = [](const DiscGrid& g) {
      const GraphClosedForms cf = graph_torsion_closed_form(monomial_spec(2), g);
      const RotationAngle a = make_rotation(
          g, [](double u, double v) { return std::sin(u) * std::cos(v); });
      const ScalarField s0 = normal_curvature(cf.torsion, g);
      const ScalarField s1 = normal_curvature(shift_torsion(cf.torsion, a), g);
      return (s0.interior - s1.interior).array().abs().maxCoeff();
    };
    // The deviation is the discrete curl of a discrete gradient; the 1/r
    // chain-rule factor near the origin caps the max-norm decay at first order.
    const double ec = deviation(coarse), ef = deviation(fine);
    add("curvature_rotation_invariance",
        ef < 1e-12 || std::log2(ec / ef) >= 0.9, order_detail(ec, ef));
  }

  {  // Neumann data with defect must be rejected.
    NeumannData d;
    d.f.interior = Eigen::VectorXd::Ones(coarse.num_interior());
    d.g = Eigen::ArrayXd::Zero(coarse.n_theta);
    d.defect = integrate_area(coarse, d.f) - integrate_boundary(coarse, d.g);
    bool rejected = false;
    try {
      solve_neumann(d, coarse);
    } catch (const ValidationError&) {
      rejected = true;
    }
    add("neumann_integrability_rejection", rejected, "defect pi rejected");
  }

  {  // Gauss identity for critical torsions.
    auto defect = [](const DiscGrid& g) {
      const GraphClosedForms cf = graph_torsion_closed_form(monomial_spec(2), g);
      return criticality_residual(cf.torsion, g).gauss_defect;
    };
    const double ec = defect(coarse), ef = defect(fine);
    add("gauss_identity", order_ok(ec, ef), order_detail(ec, ef));
  }

  {  // Pompeiu operator oracle T_B[1].
    ComplexField one;
    one.interior = Eigen::VectorXcd::Ones(fine.num_interior());
    Eigen::VectorXcd targets(fine.num_interior());
    for (int i = 0; i < fine.num_interior(); ++i) targets[i] = Complex(fine.u[i], fine.v[i]);
    const Eigen::VectorXcd got = tb_operator(fine, one, targets);
    double err = 0.0;
    for (int i = 0; i < fine.num_interior(); ++i)
      err = std::max(err, std::abs(got[i] - std::conj(targets[i])));
    add("tb_constant_oracle", err <= 1e-10, "max error " + std::to_string(err));
  }

  {  // RH ratio is scale invariant.
    const GraphClosedForms cf = graph_torsion_closed_form(monomial_spec(2), coarse);
    ScalarField s = cf.curvature;
    const ComplexTorsion a = rh_solve(s, coarse);
    ScalarField s10;
    s10.interior = 10.0 * s.interior;
    const ComplexTorsion b = rh_solve(s10, coarse);
    const double ra = sup_bound_report(a, s, std::numeric_limits<double>::infinity(), coarse).ratio;
    const double rb =
        sup_bound_report(b, s10, std::numeric_limits<double>::infinity(), coarse).ratio;
    add("rh_scale_invariance", std::abs(ra - rb) <= 1e-10 * ra,
        "ratios " + std::to_string(ra) + " vs " + std::to_string(rb));
  }

  return results;
}

}  // namespace torsion
