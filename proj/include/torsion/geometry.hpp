#pragma once

#include <functional>

#include "torsion/grid.hpp"

namespace torsion {

// Evaluators for an immersion X: B -> R^4. Analytic first derivatives are
// optional; sampling falls back to numerical differentiation without them.
struct ImmersionDescriptor {
  std::function<Eigen::Vector4d(double, double)> position;
  std::function<Eigen::Vector4d(double, double)> d_u;  // may be empty
  std::function<Eigen::Vector4d(double, double)> d_v;  // may be empty
};

// The immersion and its first derivatives on the grid, with the conformal
// metric data g11, g12, g22 and area element W.
struct ImmersionSample {
  Vec4Field X, Xu, Xv;
  ScalarField g11, g12, g22, W;
};

struct ConformalityReport {
  double max_conformal_residual = 0.0;  // max |g11 - g22| / W
  double max_skew_residual = 0.0;       // max |g12| / W
  double min_w = 0.0;
  bool pass = false;
};

// Orthonormal normal frame {N1, N2}. Analytic derivative fields, when
// present, let torsion_coefficients avoid grid differentiation.
struct NormalSection {
  Vec4Field N1, N2;
  bool analytic_derivs = false;
  Vec4Field N1_u, N1_v, N2_u, N2_v;
};

// The two independent torsion coefficients T11 = N1_u . N2, T12 = N1_v . N2;
// all other components follow from antisymmetry.
struct TorsionField {
  ScalarField T11, T12;
};

ImmersionSample sample_immersion(const ImmersionDescriptor& desc, const DiscGrid& grid);
ConformalityReport check_conformality(const ImmersionSample& sample, double tol = 1e-8);

// Deterministic nodewise Gram-Schmidt over the pivot order e3, e4, e1, e2.
// Throws ValidationError if no pivot pair yields two independent normals.
NormalSection build_normal_frame(const ImmersionSample& sample);

TorsionField torsion_coefficients(const NormalSection& section, const DiscGrid& grid);

// Curvature of the normal bundle, S = d_v T11 - d_u T12.
ScalarField normal_curvature(const TorsionField& t, const DiscGrid& grid);

// Total torsion 2 * integral of T11^2 + T12^2 over B.
double total_torsion(const TorsionField& t, const DiscGrid& grid);

// Same functional through the metric route: sum over sigma, theta of
// g^{ij} T_{sigma,i} T_{sigma,j} W with g^{ij} = delta^{ij} / W. Agrees with
// total_torsion to machine precision under conformality.
double total_torsion_metric(const TorsionField& t, const ImmersionSample& sample,
                            const DiscGrid& grid);

}  // namespace torsion
