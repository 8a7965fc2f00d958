#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace torsion {

using Complex = std::complex<double>;

// Thrown when numerical input data fails a validation check (conformality,
// Neumann integrability, degenerate frames). Distinct from invalid_argument,
// which signals structurally bad arguments.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Dir { U, V };

// Grid function on the disc: one value per interior node, plus an optional
// trace on the boundary ring r = 1 (size 0 when absent).
template <typename Scalar>
struct Field {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> interior;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> boundary;

  bool has_boundary() const { return boundary.size() > 0; }
};

using ScalarField = Field<double>;
using ComplexField = Field<Complex>;

// R^4-valued grid function, one row per node.
struct Vec4Field {
  Eigen::Matrix<double, Eigen::Dynamic, 4> interior;
  Eigen::Matrix<double, Eigen::Dynamic, 4> boundary;

  bool has_boundary() const { return boundary.rows() > 0; }
};

// Polar tensor grid on the closed unit disc B. Interior rings sit at the
// radial midpoints r_j = (j - 1/2)/n_r, so no node touches r = 0. The
// boundary ring r = 1 carries traces only; it is not a quadrature ring.
// Node ordering is ring-major: index = ring * n_theta + k.
struct DiscGrid {
  int n_r = 0;
  int n_theta = 0;
  double dr = 0.0;
  double dtheta = 0.0;

  Eigen::ArrayXd r;       // ring radii, size n_r
  Eigen::ArrayXd theta;   // node angles, size n_theta
  Eigen::ArrayXd u, v;    // interior node coordinates, size n_r * n_theta
  Eigen::ArrayXd bu, bv;  // boundary node coordinates, size n_theta

  Eigen::ArrayXd area_weights;      // r_j * dr * dtheta per interior node
  Eigen::ArrayXd boundary_weights;  // dtheta per boundary node (ds on the circle)

  Eigen::MatrixXd theta_deriv;  // spectral differentiation matrix in theta

  int num_interior() const { return n_r * n_theta; }
  int index(int ring, int k) const { return ring * n_theta + k; }
};

// n_r >= 2 radial rings, n_theta >= 4 even azimuthal nodes.
DiscGrid build_grid(int n_r, int n_theta);

// Cartesian derivative via the polar chain rule: spectral in theta,
// second-order finite differences in r (one-sided at the first and last
// ring). The boundary trace of the result comes from linear extrapolation
// off the two outermost rings.
template <typename Scalar>
Field<Scalar> differentiate(const DiscGrid& grid, const Field<Scalar>& f, Dir dir);

// Laplacian on interior nodes. The innermost ring closes the radial stencil
// through the antipodal identity f(-r, theta) = f(r, theta + pi), which is
// exact for any grid function.
template <typename Scalar>
Field<Scalar> laplacian(const DiscGrid& grid, const Field<Scalar>& f);

double integrate_area(const DiscGrid& grid, const ScalarField& f);
double integrate_area(const DiscGrid& grid, const Eigen::ArrayXd& values);
double integrate_boundary(const DiscGrid& grid, const Eigen::ArrayXd& trace);

// Outward unit normal (u, v) at each boundary node, one row per node.
Eigen::Matrix<double, Eigen::Dynamic, 2> boundary_normal(const DiscGrid& grid);

// Trace at r = 1 by linear extrapolation off the two outermost rings.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> extrapolate_boundary(
    const DiscGrid& grid, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& interior);

// Sample f(u, v) on interior and boundary nodes.
template <typename Scalar, typename F>
Field<Scalar> sample_field(const DiscGrid& grid, F&& f) {
  Field<Scalar> out;
  out.interior.resize(grid.num_interior());
  out.boundary.resize(grid.n_theta);
  for (int i = 0; i < grid.num_interior(); ++i) out.interior[i] = f(grid.u[i], grid.v[i]);
  for (int k = 0; k < grid.n_theta; ++k) out.boundary[k] = f(grid.bu[k], grid.bv[k]);
  return out;
}

template <typename F>
ScalarField sample_scalar(const DiscGrid& grid, F&& f) {
  return sample_field<double>(grid, std::forward<F>(f));
}

template <typename F>
ComplexField sample_complex(const DiscGrid& grid, F&& f) {
  return sample_field<Complex>(grid, std::forward<F>(f));
}

}  // namespace torsion
