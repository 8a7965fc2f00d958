#pragma once

#include "torsion/geometry.hpp"

namespace torsion {

// Complex-valued torsion Psi = T11 - i T12.
struct ComplexTorsion {
  ComplexField psi;
};

struct BoundReport {
  double sup_psi = 0.0;
  double s_p = 0.0;
  double ratio = 0.0;  // sup_psi / s_p, zero when s_p = 0
};

ComplexTorsion complex_torsion(const TorsionField& t);

// Residual of the non-homogeneous Cauchy-Riemann equation:
// (1/2)(Psi_u + i Psi_v) - (i/2) S on interior nodes.
ComplexField cr_residual(const ComplexTorsion& psi, const ScalarField& s, const DiscGrid& grid);

// Re[w Psi(w)] per boundary node; equals (T11, T12) . nu.
Eigen::ArrayXd rh_boundary_residual(const ComplexTorsion& psi, const DiscGrid& grid);

// Pompeiu operator T_B[f](w) = -(1/pi) integral of f(zeta) / (zeta - w) over B,
// by singularity-subtracted quadrature: a constant model against the exact
// T_B[1] = w-bar inside the closed disc, a first-order Taylor model (anchored
// at the radial projection onto the disc) against exact exterior kernel
// integrals outside. Targets may lie anywhere in C.
Eigen::VectorXcd tb_operator(const DiscGrid& grid, const ComplexField& f,
                             const Eigen::VectorXcd& targets);

// Reflected modification P_B[f](w) = T_B[f](w) - (1/w) conj(T_B[zeta f](1/w-bar)),
// evaluated on all interior and boundary nodes.
ComplexField pb_operator(const DiscGrid& grid, const ComplexField& f);

// Riemann-Hilbert solve Psi = P_B[(i/2) S] for real S.
ComplexTorsion rh_solve(const ScalarField& s, const DiscGrid& grid);

// Max boundary defect of the identity
// w P_B[f](w) = (1/pi) integral f + T_B[zeta f](w) - conj(T_B[zeta f](1/w-bar)).
double elementary_identity_check(const ComplexField& f, const DiscGrid& grid);

// sup |Psi| against s_p = L_p norm of S over B, p in (2, inf].
BoundReport sup_bound_report(const ComplexTorsion& psi, const ScalarField& s, double p,
                             const DiscGrid& grid);

}  // namespace torsion
