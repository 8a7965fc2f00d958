#include "torsion/critical.hpp"

#include <cmath>

namespace torsion {

namespace {

constexpr double kPi = 3.14159265358979323846;

using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;

ScalarField divergence(const TorsionField& t, const DiscGrid& grid) {
  ScalarField du = differentiate(grid, t.T11, Dir::U);
  ScalarField dv = differentiate(grid, t.T12, Dir::V);
  ScalarField out;
  out.interior = du.interior + dv.interior;
  out.boundary = du.boundary + dv.boundary;
  return out;
}

Eigen::ArrayXd boundary_flux(const TorsionField& t, const DiscGrid& grid) {
  if (!t.T11.has_boundary() || !t.T12.has_boundary())
    throw std::invalid_argument("torsion field lacks boundary traces");
  return t.T11.boundary.array() * grid.bu + t.T12.boundary.array() * grid.bv;
}

// Tridiagonal solve with real bands and complex right side.
VectorXcd thomas_solve(const Eigen::VectorXd& sub, Eigen::VectorXd diag,
                       const Eigen::VectorXd& sup, VectorXcd rhs) {
  const int n = static_cast<int>(diag.size());
  for (int j = 1; j < n; ++j) {
    const double m = sub[j] / diag[j - 1];
    diag[j] -= m * sup[j - 1];
    rhs[j] -= m * rhs[j - 1];
  }
  VectorXcd x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int j = n - 2; j >= 0; --j) x[j] = (rhs[j] - sup[j] * x[j + 1]) / diag[j];
  return x;
}

void apply_rotation(const Vec4Field& n1, const Vec4Field& n2, const Eigen::ArrayXd& c,
                    const Eigen::ArrayXd& s, const Eigen::ArrayXd& cb,
                    const Eigen::ArrayXd& sb, Vec4Field& out1, Vec4Field& out2) {
  out1.interior = (n1.interior.array().colwise() * c + n2.interior.array().colwise() * s).matrix();
  out2.interior =
      (n2.interior.array().colwise() * c - n1.interior.array().colwise() * s).matrix();
  out1.boundary =
      (n1.boundary.array().colwise() * cb + n2.boundary.array().colwise() * sb).matrix();
  out2.boundary =
      (n2.boundary.array().colwise() * cb - n1.boundary.array().colwise() * sb).matrix();
}

Vec4Field combine(const Vec4Field& a, const Eigen::ArrayXd& ca, const Eigen::ArrayXd& cab,
                  const Vec4Field& b, const Eigen::ArrayXd& cb, const Eigen::ArrayXd& cbb) {
  Vec4Field out;
  out.interior = (a.interior.array().colwise() * ca + b.interior.array().colwise() * cb).matrix();
  out.boundary =
      (a.boundary.array().colwise() * cab + b.boundary.array().colwise() * cbb).matrix();
  return out;
}

}  // namespace

RotationAngle negate(const RotationAngle& a) {
  RotationAngle out = a;
  out.phi.interior = -out.phi.interior;
  out.phi.boundary = -out.phi.boundary;
  out.phi_u.interior = -out.phi_u.interior;
  out.phi_u.boundary = -out.phi_u.boundary;
  out.phi_v.interior = -out.phi_v.interior;
  out.phi_v.boundary = -out.phi_v.boundary;
  return out;
}

NormalSection rotate_section(const NormalSection& n, const RotationAngle& angle) {
  const Eigen::ArrayXd c = angle.phi.interior.array().cos();
  const Eigen::ArrayXd s = angle.phi.interior.array().sin();
  if (!angle.phi.has_boundary())
    throw std::invalid_argument("rotate_section: rotation angle lacks boundary trace");
  const Eigen::ArrayXd cb = angle.phi.boundary.array().cos();
  const Eigen::ArrayXd sb = angle.phi.boundary.array().sin();

  NormalSection out;
  apply_rotation(n.N1, n.N2, c, s, cb, sb, out.N1, out.N2);

  if (n.analytic_derivs && angle.phi_u.interior.size() == n.N1.interior.rows() &&
      angle.phi_u.has_boundary()) {
    const Eigen::ArrayXd pu = angle.phi_u.interior.array();
    const Eigen::ArrayXd pv = angle.phi_v.interior.array();
    const Eigen::ArrayXd pub = angle.phi_u.boundary.array();
    const Eigen::ArrayXd pvb = angle.phi_v.boundary.array();

    auto rotated_deriv = [&](const Vec4Field& d1, const Vec4Field& d2, const Eigen::ArrayXd& g,
                             const Eigen::ArrayXd& gb, const Vec4Field& other, double sign) {
      Vec4Field base = combine(d1, c, cb, d2, s, sb);
      base.interior += (other.interior.array().colwise() * (sign * g)).matrix();
      base.boundary += (other.boundary.array().colwise() * (sign * gb)).matrix();
      return base;
    };
    // d(R N1) = R(dN1) + dphi * (R N2), d(R N2) = R(dN2) - dphi * (R N1)
    out.N1_u = rotated_deriv(n.N1_u, n.N2_u, pu, pub, out.N2, 1.0);
    out.N1_v = rotated_deriv(n.N1_v, n.N2_v, pv, pvb, out.N2, 1.0);
    Vec4Field n2u = combine(n.N2_u, c, cb, n.N1_u, -s, -sb);
    n2u.interior -= (out.N1.interior.array().colwise() * pu).matrix();
    n2u.boundary -= (out.N1.boundary.array().colwise() * pub).matrix();
    Vec4Field n2v = combine(n.N2_v, c, cb, n.N1_v, -s, -sb);
    n2v.interior -= (out.N1.interior.array().colwise() * pv).matrix();
    n2v.boundary -= (out.N1.boundary.array().colwise() * pvb).matrix();
    out.N2_u = std::move(n2u);
    out.N2_v = std::move(n2v);
    out.analytic_derivs = true;
  }
  return out;
}

TorsionField shift_torsion(const TorsionField& t, const RotationAngle& angle) {
  TorsionField out;
  out.T11.interior = t.T11.interior + angle.phi_u.interior;
  out.T12.interior = t.T12.interior + angle.phi_v.interior;
  if (t.T11.has_boundary() && angle.phi_u.has_boundary()) {
    out.T11.boundary = t.T11.boundary + angle.phi_u.boundary;
    out.T12.boundary = t.T12.boundary + angle.phi_v.boundary;
  }
  return out;
}

VariationCheck variation_identity_check(const TorsionField& t, const RotationAngle& angle,
                                        const DiscGrid& grid) {
  VariationCheck out;
  out.lhs = total_torsion(shift_torsion(t, angle), grid) - total_torsion(t, grid);

  const Eigen::ArrayXd grad_sq =
      angle.phi_u.interior.array().square() + angle.phi_v.interior.array().square();
  const Eigen::ArrayXd flux_phi = boundary_flux(t, grid) * angle.phi.boundary.array();
  const ScalarField div = divergence(t, grid);
  out.rhs = 2.0 * integrate_area(grid, grad_sq) + 4.0 * integrate_boundary(grid, flux_phi) -
            4.0 * integrate_area(grid, Eigen::ArrayXd(div.interior.array() *
                                                      angle.phi.interior.array()));
  return out;
}

CriticalityReport criticality_residual(const TorsionField& t, const DiscGrid& grid) {
  CriticalityReport rep;
  const ScalarField div = divergence(t, grid);
  rep.interior_residual =
      std::sqrt(integrate_area(grid, Eigen::ArrayXd(div.interior.array().square())));
  const Eigen::ArrayXd flux = boundary_flux(t, grid);
  rep.boundary_residual = std::sqrt(integrate_boundary(grid, flux.square()));

  const ScalarField s = normal_curvature(t, grid);
  const Eigen::ArrayXd rotated_flux =
      -t.T12.boundary.array() * grid.bu + t.T11.boundary.array() * grid.bv;
  rep.gauss_defect =
      std::abs(integrate_area(grid, s) - integrate_boundary(grid, rotated_flux));
  return rep;
}

NeumannData neumann_data(const TorsionField& t, const DiscGrid& grid) {
  NeumannData d;
  d.f = divergence(t, grid);
  d.g = boundary_flux(t, grid);
  d.defect = integrate_area(grid, d.f) - integrate_boundary(grid, d.g);
  return d;
}

RotationAngle solve_neumann(const NeumannData& data, const DiscGrid& grid, double tol) {
  const int nt = grid.n_theta;
  const int nr = grid.n_r;
  const double dr = grid.dr;

  const double f_scale = data.f.interior.array().abs().maxCoeff();
  if (std::abs(data.defect) > tol * (1.0 + f_scale))
    throw ValidationError("solve_neumann: integrability defect " + std::to_string(data.defect) +
                          " exceeds tolerance");

  // Azimuthal DFT, mode m in row m.
  MatrixXcd fwd(nt, nt);
  for (int m = 0; m < nt; ++m)
    for (int k = 0; k < nt; ++k)
      fwd(m, k) = std::polar(1.0 / nt, -grid.theta[k] * m);

  Eigen::Map<const Eigen::MatrixXd> rings(data.f.interior.data(), nt, nr);
  MatrixXcd f_hat = fwd * rings;
  VectorXcd g_hat = fwd * data.g.matrix();

  // Project the residual defect out of the zero mode; sum_j r_j dr = 1/2.
  const Complex delta =
      (grid.r.cast<Complex>() * dr * f_hat.row(0).transpose().array()).sum() - g_hat[0];
  f_hat.row(0).array() -= 2.0 * delta;

  // Ring edges e_j = j * dr; e_0 = 0 closes the center, e_nr = 1 carries g.
  Eigen::VectorXd sub(nr), sup(nr), diag_base(nr);
  for (int j = 0; j < nr; ++j) {
    const double scale = 1.0 / (grid.r[j] * dr * dr);
    const double e_lo = j * dr;
    const double e_hi = (j + 1) * dr;
    sub[j] = (j > 0) ? e_lo * scale : 0.0;
    sup[j] = (j < nr - 1) ? e_hi * scale : 0.0;
    diag_base[j] = -(e_lo + (j < nr - 1 ? e_hi : e_lo)) * scale;
  }
  // Last ring: the outer flux moved to the right side leaves only e_lo.
  diag_base[nr - 1] = -(nr - 1) * dr / (grid.r[nr - 1] * dr * dr);

  MatrixXcd phi_hat(nt, nr);
  VectorXcd trace_hat(nt);
  for (int m = 0; m < nt; ++m) {
    const int freq = (m <= nt / 2) ? m : nt - m;
    const double m2 = static_cast<double>(freq) * freq;

    VectorXcd rhs = f_hat.row(m).transpose();
    rhs[nr - 1] -= g_hat[m] / (grid.r[nr - 1] * dr);

    Eigen::VectorXd diag = diag_base;
    for (int j = 0; j < nr; ++j) diag[j] -= m2 / (grid.r[j] * grid.r[j]);

    VectorXcd sol;
    if (freq == 0) {
      // Rank-deficient mode: border with the radial mean-zero constraint.
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nr + 1, nr + 1);
      for (int j = 0; j < nr; ++j) {
        a(j, j) = diag[j];
        if (j > 0) a(j, j - 1) = sub[j];
        if (j < nr - 1) a(j, j + 1) = sup[j];
        a(j, nr) = grid.r[j] * dr;
        a(nr, j) = grid.r[j] * dr;
      }
      Eigen::MatrixXd rhs2(nr + 1, 2);
      rhs2.col(0).head(nr) = rhs.real();
      rhs2.col(1).head(nr) = rhs.imag();
      rhs2.row(nr).setZero();
      Eigen::MatrixXd x = a.partialPivLu().solve(rhs2);
      sol.resize(nr);
      sol.real() = x.col(0).head(nr);
      sol.imag() = x.col(1).head(nr);
    } else {
      sol = thomas_solve(sub, diag, sup, rhs);
    }
    phi_hat.row(m) = sol.transpose();
    // Quadratic trace: fit p(r) to the two outer rings with p'(1) = g;
    // p(1) = (9 phi_{n-1} - phi_{n-2} + 3 g dr) / 8, exact for radial
    // quadratics.
    trace_hat[m] = (9.0 * sol[nr - 1] - sol[nr - 2] + 3.0 * dr * g_hat[m]) / 8.0;
  }

  MatrixXcd inv(nt, nt);
  for (int k = 0; k < nt; ++k)
    for (int m = 0; m < nt; ++m)
      inv(k, m) = std::polar(1.0, grid.theta[k] * m);

  RotationAngle angle;
  angle.phi.interior.resize(grid.num_interior());
  Eigen::Map<Eigen::MatrixXd> out(angle.phi.interior.data(), nt, nr);
  out = (inv * phi_hat).real();
  angle.phi.boundary = (inv * trace_hat).real();

  const double mean = integrate_area(grid, angle.phi) / kPi;
  angle.phi.interior.array() -= mean;
  angle.phi.boundary.array() -= mean;

  angle.phi_u = differentiate(grid, angle.phi, Dir::U);
  angle.phi_v = differentiate(grid, angle.phi, Dir::V);
  return angle;
}

CriticalizeResult criticalize_torsion(const TorsionField& t, const DiscGrid& grid, double tol) {
  CriticalizeResult res;
  res.angle = solve_neumann(neumann_data(t, grid), grid, tol);
  res.torsion = shift_torsion(t, negate(res.angle));
  res.report = criticality_residual(res.torsion, grid);
  return res;
}

CriticalSectionResult criticalize(const NormalSection& n, const DiscGrid& grid, double tol) {
  TorsionField t = torsion_coefficients(n, grid);
  CriticalizeResult inner = criticalize_torsion(t, grid, tol);

  CriticalSectionResult res;
  res.section = rotate_section(n, negate(inner.angle));
  res.section.analytic_derivs = false;  // numeric angle breaks the analytic chain
  res.angle = std::move(inner.angle);
  res.report = inner.report;
  res.torsion = std::move(inner.torsion);
  return res;
}

double minimality_gap(const RotationAngle& angle, const DiscGrid& grid) {
  const Eigen::ArrayXd grad_sq =
      angle.phi_u.interior.array().square() + angle.phi_v.interior.array().square();
  return 2.0 * integrate_area(grid, grad_sq);
}

FlatBundleReport flat_bundle_check(const TorsionField& t, const DiscGrid& grid, double tol,
                                   double harmonic_bound) {
  const ScalarField s = normal_curvature(t, grid);

  FlatBundleReport rep;
  rep.s_inf = s.interior.array().abs().maxCoeff();
  rep.torsion_inf = t.T11.interior.array().abs().maxCoeff() +
                    t.T12.interior.array().abs().maxCoeff();
  rep.flat = rep.s_inf <= tol;
  rep.torsion_vanishes = rep.torsion_inf <= harmonic_bound * tol;

  const ScalarField lap11 = laplacian(grid, t.T11);
  const ScalarField lap12 = laplacian(grid, t.T12);
  const ScalarField s_v = differentiate(grid, s, Dir::V);
  const ScalarField s_u = differentiate(grid, s, Dir::U);
  rep.laplace_residual_t11 = (lap11.interior - s_v.interior).array().abs().maxCoeff();
  rep.laplace_residual_t12 = (lap12.interior + s_u.interior).array().abs().maxCoeff();
  return rep;
}

}  // namespace torsion
