#pragma once

#include "torsion/geometry.hpp"

namespace torsion {

// Rotation angle phi with its gradient fields. Angles produced by
// solve_neumann are mean-zero over B.
struct RotationAngle {
  ScalarField phi;
  ScalarField phi_u, phi_v;
};

struct CriticalityReport {
  double interior_residual = 0.0;  // L2 norm of div(T11, T12) over B
  double boundary_residual = 0.0;  // L2 norm of (T11, T12) . nu over dB
  double gauss_defect = 0.0;       // | int S - int (-T12, T11) . nu ds |
};

struct NeumannData {
  ScalarField f;       // right side on B
  Eigen::ArrayXd g;    // normal derivative on dB
  double defect = 0.0; // int f - int g ds
};

struct FlatBundleReport {
  double s_inf = 0.0;
  double torsion_inf = 0.0;            // max |T11| + max |T12|
  double laplace_residual_t11 = 0.0;   // max | lap T11 - d_v S |
  double laplace_residual_t12 = 0.0;   // max | lap T12 + d_u S |
  bool flat = false;
  bool torsion_vanishes = false;
};

// Rotation angle from analytic evaluators; gradients analytic when given,
// otherwise by grid differentiation.
template <typename F>
RotationAngle make_rotation(const DiscGrid& grid, F&& phi) {
  RotationAngle a;
  a.phi = sample_scalar(grid, phi);
  a.phi_u = differentiate(grid, a.phi, Dir::U);
  a.phi_v = differentiate(grid, a.phi, Dir::V);
  return a;
}

template <typename F, typename Fu, typename Fv>
RotationAngle make_rotation(const DiscGrid& grid, F&& phi, Fu&& phi_u, Fv&& phi_v) {
  RotationAngle a;
  a.phi = sample_scalar(grid, phi);
  a.phi_u = sample_scalar(grid, phi_u);
  a.phi_v = sample_scalar(grid, phi_v);
  return a;
}

RotationAngle negate(const RotationAngle& a);

// In-fiber rotation by phi; preserves orthonormality exactly. Analytic
// derivative fields propagate when both inputs carry them.
NormalSection rotate_section(const NormalSection& n, const RotationAngle& angle);

// Torsion shift under rotation: (T11 + phi_u, T12 + phi_v).
TorsionField shift_torsion(const TorsionField& t, const RotationAngle& angle);

// First-variation identity: lhs is the actual change of total torsion under
// the shift, rhs the expansion into gradient, boundary, and divergence terms.
struct VariationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};
VariationCheck variation_identity_check(const TorsionField& t, const RotationAngle& angle,
                                        const DiscGrid& grid);

CriticalityReport criticality_residual(const TorsionField& t, const DiscGrid& grid);

NeumannData neumann_data(const TorsionField& t, const DiscGrid& grid);

// Neumann problem lap phi = f in B, d_nu phi = g on dB, via azimuthal
// Fourier transform and banded second-order radial solves in conservative
// form. The zero mode is fixed by the mean-zero condition; its residual
// integrability defect (at most tol) is projected out of f. Throws
// ValidationError when |defect| > tol * (1 + max |f|).
RotationAngle solve_neumann(const NeumannData& data, const DiscGrid& grid,
                            double tol = 1e-8);

// Critical torsions from a given torsion field: solves the Neumann problem
// for the rotation angle and subtracts its gradient.
struct CriticalizeResult {
  TorsionField torsion;
  RotationAngle angle;  // carries the critical section to the given one
  CriticalityReport report;
};
CriticalizeResult criticalize_torsion(const TorsionField& t, const DiscGrid& grid,
                                      double tol = 1e-8);

// Section-level variant; the returned section is the input rotated by the
// negated angle.
struct CriticalSectionResult {
  NormalSection section;
  RotationAngle angle;
  CriticalityReport report;
  TorsionField torsion;
};
CriticalSectionResult criticalize(const NormalSection& n, const DiscGrid& grid,
                                  double tol = 1e-8);

// Excess total torsion of the rotated section over the critical one.
double minimality_gap(const RotationAngle& angle, const DiscGrid& grid);

FlatBundleReport flat_bundle_check(const TorsionField& t, const DiscGrid& grid,
                                   double tol, double harmonic_bound = 10.0);

}  // namespace torsion
