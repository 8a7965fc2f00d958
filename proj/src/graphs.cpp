#include "torsion/graphs.hpp"

#include <cmath>

namespace torsion {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

Complex HolomorphicGraphSpec::phi(Complex w) const {
  Complex acc(0.0, 0.0);
  for (Eigen::Index k = coefficients.size() - 1; k >= 0; --k) acc = acc * w + coefficients[k];
  return acc;
}

Complex HolomorphicGraphSpec::dphi(Complex w) const {
  Complex acc(0.0, 0.0);
  for (Eigen::Index k = coefficients.size() - 1; k >= 1; --k)
    acc = acc * w + static_cast<double>(k) * coefficients[k];
  return acc;
}

Complex HolomorphicGraphSpec::ddphi(Complex w) const {
  Complex acc(0.0, 0.0);
  for (Eigen::Index k = coefficients.size() - 1; k >= 2; --k)
    acc = acc * w + static_cast<double>(k * (k - 1)) * coefficients[k];
  return acc;
}

HolomorphicGraphSpec plane_spec() {
  HolomorphicGraphSpec s;
  s.coefficients = Eigen::VectorXcd::Zero(1);
  return s;
}

HolomorphicGraphSpec monomial_spec(int n, Complex scale) {
  if (n < 0) throw std::invalid_argument("monomial_spec: n must be >= 0");
  HolomorphicGraphSpec s;
  s.coefficients = Eigen::VectorXcd::Zero(n + 1);
  s.coefficients[n] = scale;
  return s;
}

ImmersionDescriptor graph_immersion(const HolomorphicGraphSpec& spec) {
  ImmersionDescriptor d;
  d.position = [spec](double u, double v) {
    const Complex p = spec.phi(Complex(u, v));
    return Eigen::Vector4d(u, v, p.real(), p.imag());
  };
  // X_u = (1, 0, Re Phi', Im Phi'), X_v = (0, 1, -Im Phi', Re Phi').
  d.d_u = [spec](double u, double v) {
    const Complex p = spec.dphi(Complex(u, v));
    return Eigen::Vector4d(1.0, 0.0, p.real(), p.imag());
  };
  d.d_v = [spec](double u, double v) {
    const Complex p = spec.dphi(Complex(u, v));
    return Eigen::Vector4d(0.0, 1.0, -p.imag(), p.real());
  };
  return d;
}

NormalSection graph_section(const HolomorphicGraphSpec& spec, const DiscGrid& grid) {
  NormalSection n;
  n.analytic_derivs = true;

  auto resize = [&](Vec4Field& f) {
    f.interior.resize(grid.num_interior(), 4);
    f.boundary.resize(grid.n_theta, 4);
  };
  resize(n.N1);
  resize(n.N2);
  resize(n.N1_u);
  resize(n.N1_v);
  resize(n.N2_u);
  resize(n.N2_v);

  auto fill = [&](double u, double v, auto&& write) {
    const Complex w(u, v);
    const Complex p = spec.dphi(w);   // A + iB
    const Complex q = spec.ddphi(w);  // Phi''
    const double a = p.real(), b = p.imag();
    const double big_w = 1.0 + a * a + b * b;
    const double sw = std::sqrt(big_w);

    // Gradients of Phi' components: A_u = Re q, A_v = -Im q, B_u = Im q, B_v = Re q.
    const double au = q.real(), av = -q.imag();
    const double bu = q.imag(), bv = q.real();
    const double wu = 2.0 * (a * au + b * bu);
    const double wv = 2.0 * (a * av + b * bv);

    const Eigen::Vector4d n1(-a / sw, b / sw, 1.0 / sw, 0.0);
    const Eigen::Vector4d n2(-b / sw, -a / sw, 0.0, 1.0 / sw);
    auto deriv = [&](const Eigen::Vector4d& base, double c0, double c1,
                     double dw) -> Eigen::Vector4d {
      return Eigen::Vector4d(c0 / sw, c1 / sw, 0.0, 0.0) - 0.5 * dw / big_w * base;
    };
    write(n1, n2, deriv(n1, -au, bu, wu), deriv(n1, -av, bv, wv), deriv(n2, -bu, -au, wu),
          deriv(n2, -bv, -av, wv));
  };

  for (int i = 0; i < grid.num_interior(); ++i) {
    fill(grid.u[i], grid.v[i],
         [&](const auto& n1, const auto& n2, const auto& d1u, const auto& d1v, const auto& d2u,
             const auto& d2v) {
           n.N1.interior.row(i) = n1.transpose();
           n.N2.interior.row(i) = n2.transpose();
           n.N1_u.interior.row(i) = d1u.transpose();
           n.N1_v.interior.row(i) = d1v.transpose();
           n.N2_u.interior.row(i) = d2u.transpose();
           n.N2_v.interior.row(i) = d2v.transpose();
         });
  }
  for (int k = 0; k < grid.n_theta; ++k) {
    fill(grid.bu[k], grid.bv[k],
         [&](const auto& n1, const auto& n2, const auto& d1u, const auto& d1v, const auto& d2u,
             const auto& d2v) {
           n.N1.boundary.row(k) = n1.transpose();
           n.N2.boundary.row(k) = n2.transpose();
           n.N1_u.boundary.row(k) = d1u.transpose();
           n.N1_v.boundary.row(k) = d1v.transpose();
           n.N2_u.boundary.row(k) = d2u.transpose();
           n.N2_v.boundary.row(k) = d2v.transpose();
         });
  }
  return n;
}

GraphClosedForms graph_torsion_closed_form(const HolomorphicGraphSpec& spec,
                                           const DiscGrid& grid) {
  GraphClosedForms out;
  auto eval = [&](double u, double v, double& t11, double& t12, double& s, double& bw) {
    const Complex w(u, v);
    const Complex p = spec.dphi(w);
    const Complex q = spec.ddphi(w);
    const double a = p.real(), b = p.imag();
    const double big_w = 1.0 + a * a + b * b;
    // T11 = (1/2W) d_v |Phi'|^2, T12 = -(1/2W) d_u |Phi'|^2.
    const Complex pc = std::conj(p) * q;
    t11 = -pc.imag() / big_w;
    t12 = -pc.real() / big_w;
    s = 2.0 * std::norm(q) / (big_w * big_w);
    bw = big_w;
  };

  const int n = grid.num_interior();
  out.torsion.T11.interior.resize(n);
  out.torsion.T12.interior.resize(n);
  out.curvature.interior.resize(n);
  out.area_element.interior.resize(n);
  out.torsion.T11.boundary.resize(grid.n_theta);
  out.torsion.T12.boundary.resize(grid.n_theta);
  out.curvature.boundary.resize(grid.n_theta);
  out.area_element.boundary.resize(grid.n_theta);

  for (int i = 0; i < n; ++i)
    eval(grid.u[i], grid.v[i], out.torsion.T11.interior[i], out.torsion.T12.interior[i],
         out.curvature.interior[i], out.area_element.interior[i]);
  for (int k = 0; k < grid.n_theta; ++k)
    eval(grid.bu[k], grid.bv[k], out.torsion.T11.boundary[k], out.torsion.T12.boundary[k],
         out.curvature.boundary[k], out.area_element.boundary[k]);
  return out;
}

Eigen::ArrayXd boundary_flux_closed_form(const HolomorphicGraphSpec& spec,
                                         const DiscGrid& grid) {
  Eigen::ArrayXd out(grid.n_theta);
  for (int k = 0; k < grid.n_theta; ++k) {
    const Complex w(grid.bu[k], grid.bv[k]);
    const Complex pc = std::conj(spec.dphi(w)) * spec.ddphi(w);
    const double big_w = 1.0 + std::norm(spec.dphi(w));
    // (1/2W) d_alpha |Phi'|^2 = (1/2W)(u q_v - v q_u) with grad q = 2 (Re pc, -Im pc).
    out[k] = (-grid.bu[k] * pc.imag() - grid.bv[k] * pc.real()) / big_w;
  }
  return out;
}

CriticalGraphCheck is_critical_graph(const HolomorphicGraphSpec& spec, double tol,
                                     int n_samples) {
  Eigen::ArrayXd q(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    const double ang = 2.0 * kPi * k / n_samples;
    q[k] = std::norm(spec.dphi(std::polar(1.0, ang)));
  }
  CriticalGraphCheck check;
  check.max_deviation = (q - q.mean()).abs().maxCoeff();
  check.critical = check.max_deviation <= tol;
  return check;
}

}  // namespace torsion
