#include "torsion/grid.hpp"

#include <cmath>

namespace torsion {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// View the ring-major interior vector as an (n_theta x n_r) matrix;
// column j is ring j.
template <typename Scalar>
Eigen::Map<const Mat<Scalar>> as_rings(const DiscGrid& grid,
                                       const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& f) {
  return Eigen::Map<const Mat<Scalar>>(f.data(), grid.n_theta, grid.n_r);
}

// d/dr across rings, second order: centered inside, one-sided at the ends.
template <typename Scalar>
Mat<Scalar> radial_derivative(const DiscGrid& grid, const Mat<Scalar>& m) {
  const int n = grid.n_r;
  const double dr = grid.dr;
  Mat<Scalar> out(m.rows(), n);
  if (n == 2) {
    out.col(0) = (m.col(1) - m.col(0)) / dr;
    out.col(1) = out.col(0);
    return out;
  }
  for (int j = 1; j + 1 < n; ++j) out.col(j) = (m.col(j + 1) - m.col(j - 1)) / (2.0 * dr);
  out.col(0) = (-3.0 * m.col(0) + 4.0 * m.col(1) - m.col(2)) / (2.0 * dr);
  out.col(n - 1) = (3.0 * m.col(n - 1) - 4.0 * m.col(n - 2) + m.col(n - 3)) / (2.0 * dr);
  return out;
}

}  // namespace

DiscGrid build_grid(int n_r, int n_theta) {
  if (n_r < 2) throw std::invalid_argument("build_grid: n_r must be >= 2");
  if (n_theta < 4 || n_theta % 2 != 0)
    throw std::invalid_argument("build_grid: n_theta must be even and >= 4");

  DiscGrid g;
  g.n_r = n_r;
  g.n_theta = n_theta;
  g.dr = 1.0 / n_r;
  g.dtheta = 2.0 * kPi / n_theta;

  g.r = (Eigen::ArrayXd::LinSpaced(n_r, 1.0, static_cast<double>(n_r)) - 0.5) * g.dr;
  g.theta = Eigen::ArrayXd::LinSpaced(n_theta, 0.0, static_cast<double>(n_theta) - 1.0) * g.dtheta;

  const int n = n_r * n_theta;
  g.u.resize(n);
  g.v.resize(n);
  g.area_weights.resize(n);
  for (int j = 0; j < n_r; ++j) {
    for (int k = 0; k < n_theta; ++k) {
      const int i = g.index(j, k);
      g.u[i] = g.r[j] * std::cos(g.theta[k]);
      g.v[i] = g.r[j] * std::sin(g.theta[k]);
      g.area_weights[i] = g.r[j] * g.dr * g.dtheta;
    }
  }
  g.bu = g.theta.cos();
  g.bv = g.theta.sin();
  g.boundary_weights = Eigen::ArrayXd::Constant(n_theta, g.dtheta);

  // Spectral differentiation matrix for an even number of equispaced nodes.
  g.theta_deriv.setZero(n_theta, n_theta);
  for (int j = 0; j < n_theta; ++j) {
    for (int k = 0; k < n_theta; ++k) {
      if (j == k) continue;
      const double sign = ((j - k) % 2 == 0) ? 1.0 : -1.0;
      g.theta_deriv(j, k) = 0.5 * sign / std::tan(0.5 * (g.theta[j] - g.theta[k]));
    }
  }
  return g;
}

template <typename Scalar>
Field<Scalar> differentiate(const DiscGrid& grid, const Field<Scalar>& f, Dir dir) {
  if (f.interior.size() != grid.num_interior())
    throw std::invalid_argument("differentiate: field size does not match grid");

  const auto m = as_rings<Scalar>(grid, f.interior);
  Mat<Scalar> d_theta = grid.theta_deriv * m;
  Mat<Scalar> d_r = radial_derivative<Scalar>(grid, m);

  Field<Scalar> out;
  out.interior.resize(grid.num_interior());
  Eigen::Map<Mat<Scalar>> result(out.interior.data(), grid.n_theta, grid.n_r);

  const Eigen::ArrayXd ct = grid.theta.cos();
  const Eigen::ArrayXd st = grid.theta.sin();
  for (int j = 0; j < grid.n_r; ++j) {
    const double inv_r = 1.0 / grid.r[j];
    if (dir == Dir::U) {
      result.col(j) = (ct * d_r.col(j).array() - st * inv_r * d_theta.col(j).array()).matrix();
    } else {
      result.col(j) = (st * d_r.col(j).array() + ct * inv_r * d_theta.col(j).array()).matrix();
    }
  }
  out.boundary = extrapolate_boundary<Scalar>(grid, out.interior);
  return out;
}

template <typename Scalar>
Field<Scalar> laplacian(const DiscGrid& grid, const Field<Scalar>& f) {
  if (f.interior.size() != grid.num_interior())
    throw std::invalid_argument("laplacian: field size does not match grid");
  const int n = grid.n_r;
  if (n < 4) throw std::invalid_argument("laplacian: requires n_r >= 4");
  const double dr = grid.dr;
  const int half = grid.n_theta / 2;

  const auto m = as_rings<Scalar>(grid, f.interior);
  Mat<Scalar> d_theta2 = grid.theta_deriv * (grid.theta_deriv * m).eval();

  // Antipodal ghost ring at r = -dr/2.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ghost(grid.n_theta);
  for (int k = 0; k < grid.n_theta; ++k) ghost[k] = m((k + half) % grid.n_theta, 0);

  Field<Scalar> out;
  out.interior.resize(grid.num_interior());
  Eigen::Map<Mat<Scalar>> result(out.interior.data(), grid.n_theta, grid.n_r);

  for (int j = 0; j < n; ++j) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> f_rr, f_r;
    if (j == 0) {
      f_rr = (m.col(1) - 2.0 * m.col(0) + ghost) / (dr * dr);
      f_r = (m.col(1) - ghost) / (2.0 * dr);
    } else if (j == n - 1) {
      f_rr = (2.0 * m.col(n - 1) - 5.0 * m.col(n - 2) + 4.0 * m.col(n - 3) - m.col(n - 4)) /
             (dr * dr);
      f_r = (3.0 * m.col(n - 1) - 4.0 * m.col(n - 2) + m.col(n - 3)) / (2.0 * dr);
    } else {
      f_rr = (m.col(j + 1) - 2.0 * m.col(j) + m.col(j - 1)) / (dr * dr);
      f_r = (m.col(j + 1) - m.col(j - 1)) / (2.0 * dr);
    }
    const double inv_r = 1.0 / grid.r[j];
    result.col(j) = f_rr + inv_r * f_r + inv_r * inv_r * d_theta2.col(j);
  }
  return out;
}

double integrate_area(const DiscGrid& grid, const ScalarField& f) {
  return integrate_area(grid, Eigen::ArrayXd(f.interior.array()));
}

double integrate_area(const DiscGrid& grid, const Eigen::ArrayXd& values) {
  if (values.size() != grid.num_interior())
    throw std::invalid_argument("integrate_area: size mismatch");
  return (grid.area_weights * values).sum();
}

double integrate_boundary(const DiscGrid& grid, const Eigen::ArrayXd& trace) {
  if (trace.size() != grid.n_theta)
    throw std::invalid_argument("integrate_boundary: size mismatch");
  return (grid.boundary_weights * trace).sum();
}

Eigen::Matrix<double, Eigen::Dynamic, 2> boundary_normal(const DiscGrid& grid) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> nu(grid.n_theta, 2);
  nu.col(0) = grid.bu.matrix();
  nu.col(1) = grid.bv.matrix();
  return nu;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> extrapolate_boundary(
    const DiscGrid& grid, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& interior) {
  if (interior.size() != grid.num_interior())
    throw std::invalid_argument("extrapolate_boundary: size mismatch");
  const auto m = as_rings<Scalar>(grid, interior);
  // r = 1 lies dr/2 beyond the last ring; linear extrapolation there.
  return 1.5 * m.col(grid.n_r - 1) - 0.5 * m.col(grid.n_r - 2);
}

template Field<double> differentiate(const DiscGrid&, const Field<double>&, Dir);
template Field<Complex> differentiate(const DiscGrid&, const Field<Complex>&, Dir);
template Field<double> laplacian(const DiscGrid&, const Field<double>&);
template Field<Complex> laplacian(const DiscGrid&, const Field<Complex>&);
template Eigen::Matrix<double, Eigen::Dynamic, 1> extrapolate_boundary(
    const DiscGrid&, const Eigen::Matrix<double, Eigen::Dynamic, 1>&);
template Eigen::Matrix<Complex, Eigen::Dynamic, 1> extrapolate_boundary(
    const DiscGrid&, const Eigen::Matrix<Complex, Eigen::Dynamic, 1>&);

}  // namespace torsion
