#include "torsion/geometry.hpp"

#include <array>
#include <cmath>

namespace torsion {

namespace {

Vec4Field sample_vec4(const DiscGrid& grid,
                      const std::function<Eigen::Vector4d(double, double)>& f) {
  Vec4Field out;
  out.interior.resize(grid.num_interior(), 4);
  out.boundary.resize(grid.n_theta, 4);
  for (int i = 0; i < grid.num_interior(); ++i)
    out.interior.row(i) = f(grid.u[i], grid.v[i]).transpose();
  for (int k = 0; k < grid.n_theta; ++k)
    out.boundary.row(k) = f(grid.bu[k], grid.bv[k]).transpose();
  return out;
}

Vec4Field differentiate_vec4(const DiscGrid& grid, const Vec4Field& f, Dir dir) {
  Vec4Field out;
  out.interior.resize(f.interior.rows(), 4);
  out.boundary.resize(grid.n_theta, 4);
  for (int c = 0; c < 4; ++c) {
    ScalarField comp;
    comp.interior = f.interior.col(c);
    ScalarField d = differentiate(grid, comp, dir);
    out.interior.col(c) = d.interior;
    out.boundary.col(c) = d.boundary;
  }
  return out;
}

ScalarField rowwise_dot(const Vec4Field& a, const Vec4Field& b) {
  ScalarField out;
  out.interior = (a.interior.array() * b.interior.array()).rowwise().sum().matrix();
  if (a.boundary.rows() > 0 && b.boundary.rows() > 0)
    out.boundary = (a.boundary.array() * b.boundary.array()).rowwise().sum().matrix();
  return out;
}

// Component of c orthogonal to the frame rows collected in basis.
Eigen::Vector4d project_out(const Eigen::Vector4d& c,
                            const std::vector<Eigen::Vector4d>& basis) {
  Eigen::Vector4d p = c;
  for (const auto& b : basis) p -= p.dot(b) * b;
  return p;
}

void orthonormal_pair(const Eigen::Vector4d& xu, const Eigen::Vector4d& xv,
                      Eigen::Vector4d& n1, Eigen::Vector4d& n2) {
  constexpr double kPivotTol = 1e-6;
  static const std::array<Eigen::Vector4d, 4> kCandidates = {
      Eigen::Vector4d::Unit(2), Eigen::Vector4d::Unit(3), Eigen::Vector4d::Unit(0),
      Eigen::Vector4d::Unit(1)};

  std::vector<Eigen::Vector4d> basis;
  basis.push_back(xu.normalized());
  Eigen::Vector4d t2 = project_out(xv, basis);
  if (t2.norm() < kPivotTol * xv.norm())
    throw ValidationError("build_normal_frame: degenerate tangent plane");
  basis.push_back(t2.normalized());

  int found = 0;
  for (const auto& c : kCandidates) {
    Eigen::Vector4d p = project_out(c, basis);
    if (p.norm() < kPivotTol) continue;
    basis.push_back(p.normalized());
    if (found == 0)
      n1 = basis.back();
    else
      n2 = basis.back();
    if (++found == 2) return;
  }
  throw ValidationError("build_normal_frame: no pivot yields two independent normals");
}

}  // namespace

ImmersionSample sample_immersion(const ImmersionDescriptor& desc, const DiscGrid& grid) {
  if (!desc.position) throw std::invalid_argument("sample_immersion: missing position evaluator");

  ImmersionSample s;
  s.X = sample_vec4(grid, desc.position);
  if (desc.d_u && desc.d_v) {
    s.Xu = sample_vec4(grid, desc.d_u);
    s.Xv = sample_vec4(grid, desc.d_v);
  } else {
    s.Xu = differentiate_vec4(grid, s.X, Dir::U);
    s.Xv = differentiate_vec4(grid, s.X, Dir::V);
  }
  s.g11 = rowwise_dot(s.Xu, s.Xu);
  s.g12 = rowwise_dot(s.Xu, s.Xv);
  s.g22 = rowwise_dot(s.Xv, s.Xv);
  s.W.interior = 0.5 * (s.g11.interior + s.g22.interior);
  s.W.boundary = 0.5 * (s.g11.boundary + s.g22.boundary);
  return s;
}

ConformalityReport check_conformality(const ImmersionSample& s, double tol) {
  ConformalityReport rep;
  auto scan = [&rep](const Eigen::VectorXd& g11, const Eigen::VectorXd& g12,
                     const Eigen::VectorXd& g22, const Eigen::VectorXd& w, bool first) {
    double conf = ((g11 - g22).array().abs() / w.array()).maxCoeff();
    double skew = (g12.array().abs() / w.array()).maxCoeff();
    double wmin = w.minCoeff();
    rep.max_conformal_residual = std::max(rep.max_conformal_residual, conf);
    rep.max_skew_residual = std::max(rep.max_skew_residual, skew);
    rep.min_w = first ? wmin : std::min(rep.min_w, wmin);
  };
  scan(s.g11.interior, s.g12.interior, s.g22.interior, s.W.interior, true);
  if (s.g11.has_boundary())
    scan(s.g11.boundary, s.g12.boundary, s.g22.boundary, s.W.boundary, false);
  rep.pass = rep.min_w > 0.0 && rep.max_conformal_residual <= tol && rep.max_skew_residual <= tol;
  return rep;
}

NormalSection build_normal_frame(const ImmersionSample& s) {
  NormalSection n;
  n.N1.interior.resize(s.X.interior.rows(), 4);
  n.N2.interior.resize(s.X.interior.rows(), 4);
  n.N1.boundary.resize(s.X.boundary.rows(), 4);
  n.N2.boundary.resize(s.X.boundary.rows(), 4);

  Eigen::Vector4d n1, n2;
  for (int i = 0; i < s.X.interior.rows(); ++i) {
    orthonormal_pair(s.Xu.interior.row(i), s.Xv.interior.row(i), n1, n2);
    n.N1.interior.row(i) = n1.transpose();
    n.N2.interior.row(i) = n2.transpose();
  }
  for (int k = 0; k < s.X.boundary.rows(); ++k) {
    orthonormal_pair(s.Xu.boundary.row(k), s.Xv.boundary.row(k), n1, n2);
    n.N1.boundary.row(k) = n1.transpose();
    n.N2.boundary.row(k) = n2.transpose();
  }
  return n;
}

TorsionField torsion_coefficients(const NormalSection& n, const DiscGrid& grid) {
  TorsionField t;
  if (n.analytic_derivs) {
    t.T11 = rowwise_dot(n.N1_u, n.N2);
    t.T12 = rowwise_dot(n.N1_v, n.N2);
  } else {
    Vec4Field du = differentiate_vec4(grid, n.N1, Dir::U);
    Vec4Field dv = differentiate_vec4(grid, n.N1, Dir::V);
    t.T11 = rowwise_dot(du, n.N2);
    t.T12 = rowwise_dot(dv, n.N2);
  }
  return t;
}

ScalarField normal_curvature(const TorsionField& t, const DiscGrid& grid) {
  ScalarField dv = differentiate(grid, t.T11, Dir::V);
  ScalarField du = differentiate(grid, t.T12, Dir::U);
  ScalarField s;
  s.interior = dv.interior - du.interior;
  s.boundary = dv.boundary - du.boundary;
  return s;
}

double total_torsion(const TorsionField& t, const DiscGrid& grid) {
  Eigen::ArrayXd density =
      t.T11.interior.array().square() + t.T12.interior.array().square();
  return 2.0 * integrate_area(grid, density);
}

double total_torsion_metric(const TorsionField& t, const ImmersionSample& sample,
                            const DiscGrid& grid) {
  // g^{ij} = delta^{ij} / W under conformality; the sum over sigma != theta
  // doubles the (1,2) contribution.
  Eigen::ArrayXd density =
      2.0 *
      (t.T11.interior.array().square() + t.T12.interior.array().square()) /
      sample.W.interior.array() * sample.W.interior.array();
  return integrate_area(grid, density);
}

}  // namespace torsion
