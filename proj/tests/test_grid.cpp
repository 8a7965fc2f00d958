#include <doctest.h>

#include "test_util.hpp"
#include "torsion/grid.hpp"

using namespace torsion;
using test::kPi;
using test::observed_order;
using test::refinement_errors;

TEST_CASE("build_grid node layout") {
  const DiscGrid g = build_grid(2, 4);
  CHECK(g.num_interior() == 8);
  CHECK(g.r[0] == doctest::Approx(0.25));
  CHECK(g.r[1] == doctest::Approx(0.75));
  CHECK(g.bu.size() == 4);
  for (int i = 0; i < g.num_interior(); ++i)
    CHECK(g.u[i] * g.u[i] + g.v[i] * g.v[i] < 1.0);
  for (int k = 0; k < g.n_theta; ++k)
    CHECK(g.bu[k] * g.bu[k] + g.bv[k] * g.bv[k] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("build_grid rejects bad parameters") {
  CHECK_THROWS_AS(build_grid(1, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(8, 7), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(8, 2), std::invalid_argument);
}

TEST_CASE("quadrature weights") {
  const DiscGrid g = build_grid(64, 128);
  CHECK(g.area_weights.sum() == doctest::Approx(kPi).epsilon(1e-3));
  CHECK(g.boundary_weights.sum() == doctest::Approx(2.0 * kPi).epsilon(1e-14));
}

TEST_CASE("differentiate polynomials") {
  const DiscGrid g = build_grid(16, 32);
  ScalarField f = sample_scalar(g, [](double u, double v) { return u * u - v * v; });
  const ScalarField d = differentiate(g, f, Dir::U);
  for (int i = 0; i < g.num_interior(); ++i)
    CHECK(d.interior[i] == doctest::Approx(2.0 * g.u[i]).epsilon(1e-11));

  ScalarField c = sample_scalar(g, [](double, double) { return 3.5; });
  const ScalarField dc = differentiate(g, c, Dir::V);
  CHECK(dc.interior.array().abs().maxCoeff() < 1e-11);
}

TEST_CASE("differentiate r^4 converges at second order") {
  // Oracle: d/dv (u^2 + v^2)^2 = 4 r^2 v.
  auto err = [](const DiscGrid& g) {
    ScalarField f = sample_scalar(g, [](double u, double v) {
      const double r2 = u * u + v * v;
      return r2 * r2;
    });
    const ScalarField d = differentiate(g, f, Dir::V);
    double e = 0.0;
    for (int i = 0; i < g.num_interior(); ++i) {
      const double want = 4.0 * (g.u[i] * g.u[i] + g.v[i] * g.v[i]) * g.v[i];
      e = std::max(e, std::abs(d.interior[i] - want));
    }
    return e;
  };
  CHECK(observed_order(refinement_errors(8, 16, 3, err)) >= 1.8);
}

TEST_CASE("differentiate is linear") {
  const DiscGrid g = build_grid(8, 16);
  ScalarField a = sample_scalar(g, [](double u, double v) { return std::sin(u + v); });
  ScalarField b = sample_scalar(g, [](double u, double v) { return std::exp(u - v); });
  ScalarField combo;
  combo.interior = 2.0 * a.interior - 3.0 * b.interior;
  const ScalarField d_combo = differentiate(g, combo, Dir::U);
  const ScalarField da = differentiate(g, a, Dir::U);
  const ScalarField db = differentiate(g, b, Dir::U);
  const Eigen::VectorXd expect = 2.0 * da.interior - 3.0 * db.interior;
  CHECK((d_combo.interior - expect).array().abs().maxCoeff() < 1e-12);
}

TEST_CASE("integrate_area examples") {
  const DiscGrid g = build_grid(64, 128);
  ScalarField one = sample_scalar(g, [](double, double) { return 1.0; });
  CHECK(integrate_area(g, one) == doctest::Approx(kPi).epsilon(1e-3));

  // Oracle: int r^2 over B = pi / 2.
  ScalarField r2 = sample_scalar(g, [](double u, double v) { return u * u + v * v; });
  CHECK(integrate_area(g, r2) == doctest::Approx(kPi / 2.0).epsilon(1e-3));

  ScalarField odd = sample_scalar(g, [](double u, double) { return u; });
  CHECK(std::abs(integrate_area(g, odd)) < 1e-13);
}

TEST_CASE("integrate_boundary examples") {
  const DiscGrid g = build_grid(8, 64);
  CHECK(integrate_boundary(g, Eigen::ArrayXd::Ones(g.n_theta)) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(std::abs(integrate_boundary(g, g.theta.cos())) < 1e-13);
  // Oracle: int cos^2 over the circle = pi.
  CHECK(integrate_boundary(g, g.theta.cos().square()) == doctest::Approx(kPi).epsilon(1e-13));
}

TEST_CASE("boundary_normal is the radial unit vector") {
  const DiscGrid g = build_grid(4, 8);
  const auto nu = boundary_normal(g);
  CHECK(nu(0, 0) == doctest::Approx(1.0));
  CHECK(nu(0, 1) == doctest::Approx(0.0));
  for (int k = 0; k < g.n_theta; ++k)
    CHECK(nu.row(k).norm() == doctest::Approx(1.0).epsilon(1e-14));
  const int k_down = 3 * g.n_theta / 4;  // theta = 3 pi / 2
  CHECK(nu(k_down, 0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(nu(k_down, 1) == doctest::Approx(-1.0));
}

TEST_CASE("discrete divergence theorem") {
  auto defect = [](const DiscGrid& g) {
    ScalarField p = sample_scalar(g, [](double u, double v) { return std::sin(u) * v; });
    ScalarField q = sample_scalar(g, [](double u, double v) { return std::cos(v) * u * u; });
    const ScalarField pu = differentiate(g, p, Dir::U);
    const ScalarField qv = differentiate(g, q, Dir::V);
    const double area = integrate_area(g, Eigen::ArrayXd(pu.interior + qv.interior));
    const double bdry = integrate_boundary(g, p.boundary.array() * g.bu + q.boundary.array() * g.bv);
    return std::abs(area - bdry);
  };
  CHECK(observed_order(refinement_errors(16, 32, 3, defect)) >= 1.8);
}

TEST_CASE("point-symmetric quadrature kills odd integrands") {
  const DiscGrid g = build_grid(13, 26);
  ScalarField odd = sample_scalar(g, [](double u, double v) { return u * std::exp(v * v) + v; });
  CHECK(std::abs(integrate_area(g, odd)) < 1e-13);
}

TEST_CASE("laplacian of harmonic polynomials") {
  const DiscGrid g = build_grid(16, 32);
  ScalarField h = sample_scalar(g, [](double u, double v) { return u * u - v * v + 3.0 * u * v; });
  const ScalarField lap = laplacian(g, h);
  CHECK(lap.interior.array().abs().maxCoeff() < 1e-10);

  ScalarField r2 = sample_scalar(g, [](double u, double v) { return u * u + v * v; });
  const ScalarField lap2 = laplacian(g, r2);
  for (int i = 0; i < g.num_interior(); ++i)
    CHECK(lap2.interior[i] == doctest::Approx(4.0).epsilon(1e-10));
}
