#pragma once

#include "torsion/geometry.hpp"

namespace torsion {

// Holomorphic polynomial graph X(w) = (w, Phi(w)), Phi(w) = sum a_k w^k.
// Conformal with area element W = 1 + |Phi'|^2 >= 1.
struct HolomorphicGraphSpec {
  Eigen::VectorXcd coefficients;  // a_0 ... a_d

  Complex phi(Complex w) const;    // Phi(w)
  Complex dphi(Complex w) const;   // Phi'(w)
  Complex ddphi(Complex w) const;  // Phi''(w)
};

HolomorphicGraphSpec plane_spec();
HolomorphicGraphSpec monomial_spec(int n, Complex scale = Complex(1.0, 0.0));

ImmersionDescriptor graph_immersion(const HolomorphicGraphSpec& spec);

// The section N1 = (-phi_u, -phi_v, 1, 0)/sqrt(W), N2 = (-psi_u, -psi_v, 0, 1)/sqrt(W),
// with analytic derivative fields.
NormalSection graph_section(const HolomorphicGraphSpec& spec, const DiscGrid& grid);

struct GraphClosedForms {
  TorsionField torsion;      // with boundary traces
  ScalarField curvature;     // S = 2 |Phi''|^2 / W^2
  ScalarField area_element;  // W
};
GraphClosedForms graph_torsion_closed_form(const HolomorphicGraphSpec& spec,
                                           const DiscGrid& grid);

// Boundary flux (T11, T12) . nu = (1/2W) d_alpha |Phi'|^2 at r = 1.
Eigen::ArrayXd boundary_flux_closed_form(const HolomorphicGraphSpec& spec,
                                         const DiscGrid& grid);

// The graph section is critical iff |Phi'| is constant on the boundary circle.
struct CriticalGraphCheck {
  bool critical = false;
  double max_deviation = 0.0;  // max over dB of | |Phi'|^2 - mean |
};
CriticalGraphCheck is_critical_graph(const HolomorphicGraphSpec& spec, double tol,
                                     int n_samples = 1024);

}  // namespace torsion
