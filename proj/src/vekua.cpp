#include "torsion/vekua.hpp"

#include <cmath>

namespace torsion {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXcd node_positions(const DiscGrid& grid) {
  Eigen::VectorXcd z(grid.num_interior());
  for (int i = 0; i < grid.num_interior(); ++i) z[i] = Complex(grid.u[i], grid.v[i]);
  return z;
}

// Bilinear interpolation in (r, theta); radial weights run outside [0, 1]
// beyond the first/last ring (linear extrapolation).
Complex interpolate(const DiscGrid& grid, const ComplexField& f, Complex w) {
  const double rho = std::abs(w);
  double ang = std::arg(w);
  if (ang < 0.0) ang += 2.0 * kPi;

  int j0 = static_cast<int>(std::floor(rho / grid.dr - 0.5));
  j0 = std::max(0, std::min(grid.n_r - 2, j0));
  const double tr = (rho - grid.r[j0]) / grid.dr;

  const double a = ang / grid.dtheta;
  int k0 = static_cast<int>(std::floor(a)) % grid.n_theta;
  const double ts = a - std::floor(a);
  const int k1 = (k0 + 1) % grid.n_theta;

  const Complex f00 = f.interior[grid.index(j0, k0)];
  const Complex f01 = f.interior[grid.index(j0, k1)];
  const Complex f10 = f.interior[grid.index(j0 + 1, k0)];
  const Complex f11 = f.interior[grid.index(j0 + 1, k1)];
  return (1.0 - tr) * ((1.0 - ts) * f00 + ts * f01) + tr * ((1.0 - ts) * f10 + ts * f11);
}

}  // namespace

ComplexTorsion complex_torsion(const TorsionField& t) {
  ComplexTorsion out;
  out.psi.interior = t.T11.interior.cast<Complex>() - Complex(0, 1) * t.T12.interior.cast<Complex>();
  if (t.T11.has_boundary())
    out.psi.boundary =
        t.T11.boundary.cast<Complex>() - Complex(0, 1) * t.T12.boundary.cast<Complex>();
  return out;
}

ComplexField cr_residual(const ComplexTorsion& psi, const ScalarField& s, const DiscGrid& grid) {
  const ComplexField du = differentiate(grid, psi.psi, Dir::U);
  const ComplexField dv = differentiate(grid, psi.psi, Dir::V);
  ComplexField out;
  out.interior = 0.5 * (du.interior + Complex(0, 1) * dv.interior) -
                 Complex(0, 0.5) * s.interior.cast<Complex>();
  return out;
}

Eigen::ArrayXd rh_boundary_residual(const ComplexTorsion& psi, const DiscGrid& grid) {
  if (!psi.psi.has_boundary())
    throw std::invalid_argument("rh_boundary_residual: missing boundary trace");
  Eigen::ArrayXd out(grid.n_theta);
  for (int k = 0; k < grid.n_theta; ++k) {
    const Complex w(grid.bu[k], grid.bv[k]);
    out[k] = (w * psi.psi.boundary[k]).real();
  }
  return out;
}

Eigen::VectorXcd tb_operator(const DiscGrid& grid, const ComplexField& f,
                             const Eigen::VectorXcd& targets) {
  if (f.interior.size() != grid.num_interior())
    throw std::invalid_argument("tb_operator: field size does not match grid");

  const Eigen::VectorXcd zeta = node_positions(grid);
  const Eigen::ArrayXd& wgt = grid.area_weights;
  const Eigen::ArrayXcd cwgt = wgt.cast<Complex>();

  // Exterior targets (reflections of near-boundary nodes come arbitrarily
  // close to the circle) subtract a first-order Taylor model of f anchored at
  // the radial projection p onto the closed disc, integrated exactly via
  // T_B[1](w) = 1/w, T_B[zeta](w) = 0, T_B[zeta-bar](w) = 1/(2w^2) for |w| > 1.
  // The leftover integrand is O(|zeta - p|^2 / |zeta - w|), so the quadrature
  // error stays smooth in w and survives later differentiation at full order.
  const bool need_exterior =
      (targets.array().abs() > 1.0 + 1e-14).any();
  ComplexField fz, fzb;
  if (need_exterior) {
    const ComplexField fu = differentiate(grid, f, Dir::U);
    const ComplexField fv = differentiate(grid, f, Dir::V);
    fz.interior = 0.5 * (fu.interior - Complex(0, 1) * fv.interior);
    fzb.interior = 0.5 * (fu.interior + Complex(0, 1) * fv.interior);
  }

  Eigen::VectorXcd out(targets.size());
  for (Eigen::Index tgt = 0; tgt < targets.size(); ++tgt) {
    const Complex w = targets[tgt];
    const double rho = std::abs(w);
    const bool inside = rho <= 1.0 + 1e-14;

    Complex model_tb;          // T_B of the subtracted model at w
    Eigen::ArrayXcd residual;  // f minus the model on the nodes
    if (inside) {
      const Complex ft = interpolate(grid, f, w);
      model_tb = ft * std::conj(w);
      residual = f.interior.array() - ft;
    } else {
      const Complex p = w / rho;
      const Complex f0 = interpolate(grid, f, p);
      const Complex dz = interpolate(grid, fz, p);
      const Complex dzb = interpolate(grid, fzb, p);
      model_tb = f0 / w - dz * p / w + dzb * (0.5 / (w * w) - std::conj(p) / w);
      residual = f.interior.array() - f0 - dz * (zeta.array() - p) -
                 dzb * (zeta.array().conjugate() - std::conj(p));
    }

    Eigen::ArrayXcd terms = residual / (zeta.array() - w) * cwgt;

    // The node nearest w sees a bounded subtracted integrand (0/0 when w is a
    // node); drop its term when it sits closer than half a cell diameter.
    double ang = std::arg(w);
    if (ang < 0.0) ang += 2.0 * kPi;
    int jn = static_cast<int>(std::floor(rho / grid.dr - 0.5 + 0.5));
    jn = std::max(0, std::min(grid.n_r - 1, jn));
    int kn = static_cast<int>(std::llround(ang / grid.dtheta)) % grid.n_theta;
    const int nearest = grid.index(jn, kn);
    const double half_cell =
        0.5 * std::hypot(grid.dr, grid.r[jn] * grid.dtheta);
    if (std::abs(zeta[nearest] - w) < half_cell) terms[nearest] = Complex(0.0, 0.0);

    out[tgt] = model_tb - terms.sum() / kPi;
  }
  return out;
}

ComplexField pb_operator(const DiscGrid& grid, const ComplexField& f) {
  const int n = grid.num_interior();
  const int nb = grid.n_theta;

  Eigen::VectorXcd targets(n + nb), reflected(n + nb);
  for (int i = 0; i < n; ++i) {
    const Complex w(grid.u[i], grid.v[i]);
    targets[i] = w;
    reflected[i] = 1.0 / std::conj(w);
  }
  for (int k = 0; k < nb; ++k) {
    const Complex w(grid.bu[k], grid.bv[k]);
    targets[n + k] = w;
    reflected[n + k] = w;  // 1 / conj(w) = w on the unit circle
  }

  ComplexField zf;
  zf.interior = (node_positions(grid).array() * f.interior.array()).matrix();

  const Eigen::VectorXcd direct = tb_operator(grid, f, targets);
  const Eigen::VectorXcd mirror = tb_operator(grid, zf, reflected);

  ComplexField out;
  out.interior.resize(n);
  out.boundary.resize(nb);
  for (int i = 0; i < n + nb; ++i) {
    const Complex val = direct[i] - std::conj(mirror[i]) / targets[i];
    if (i < n)
      out.interior[i] = val;
    else
      out.boundary[i - n] = val;
  }
  return out;
}

ComplexTorsion rh_solve(const ScalarField& s, const DiscGrid& grid) {
  ComplexField f;
  f.interior = (Complex(0, 0.5) * s.interior.cast<Complex>().array()).matrix();
  ComplexTorsion out;
  out.psi = pb_operator(grid, f);
  return out;
}

double elementary_identity_check(const ComplexField& f, const DiscGrid& grid) {
  const ComplexField pb = pb_operator(grid, f);

  ComplexField zf;
  zf.interior = (node_positions(grid).array() * f.interior.array()).matrix();

  Eigen::VectorXcd wb(grid.n_theta);
  for (int k = 0; k < grid.n_theta; ++k) wb[k] = Complex(grid.bu[k], grid.bv[k]);
  const Eigen::VectorXcd tbg = tb_operator(grid, zf, wb);

  const Complex mean =
      (grid.area_weights.cast<Complex>() * f.interior.array()).sum() / kPi;

  double max_defect = 0.0;
  for (int k = 0; k < grid.n_theta; ++k) {
    const Complex lhs = wb[k] * pb.boundary[k];
    const Complex rhs = mean + tbg[k] - std::conj(tbg[k]);
    max_defect = std::max(max_defect, std::abs(lhs - rhs));
  }
  return max_defect;
}

BoundReport sup_bound_report(const ComplexTorsion& psi, const ScalarField& s, double p,
                             const DiscGrid& grid) {
  if (!(p > 2.0)) throw std::invalid_argument("sup_bound_report: requires p > 2");

  BoundReport rep;
  rep.sup_psi = psi.psi.interior.array().abs().maxCoeff();
  if (psi.psi.has_boundary())
    rep.sup_psi = std::max(rep.sup_psi, psi.psi.boundary.array().abs().maxCoeff());

  if (std::isinf(p)) {
    rep.s_p = s.interior.array().abs().maxCoeff();
    if (s.has_boundary()) rep.s_p = std::max(rep.s_p, s.boundary.array().abs().maxCoeff());
  } else {
    rep.s_p = std::pow(
        integrate_area(grid, Eigen::ArrayXd(s.interior.array().abs().pow(p))), 1.0 / p);
  }
  rep.ratio = rep.s_p > 0.0 ? rep.sup_psi / rep.s_p : 0.0;
  return rep;
}

}  // namespace torsion
