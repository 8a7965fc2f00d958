#include <doctest.h>

#include <limits>

#include "test_util.hpp"
#include "torsion/graphs.hpp"
#include "torsion/vekua.hpp"

using namespace torsion;
using test::kPi;
using test::observed_order;
using test::refinement_errors;

namespace {

constexpr Complex kI(0.0, 1.0);

ComplexField graph_psi(const DiscGrid& g) {
  // Psi = 4 i w-bar / (1 + 4 r^2) for the graph of w^2.
  return sample_complex(g, [](double u, double v) {
    const double w2 = u * u + v * v;
    return 4.0 * kI * Complex(u, -v) / (1.0 + 4.0 * w2);
  });
}

ScalarField graph_s(const DiscGrid& g) {
  return sample_scalar(g, [](double u, double v) {
    const double w = 1.0 + 4.0 * (u * u + v * v);
    return 8.0 / (w * w);
  });
}

}  // namespace

TEST_CASE("complex_torsion packs T11 - i T12") {
  const DiscGrid g = build_grid(8, 16);
  const GraphClosedForms cf = graph_torsion_closed_form(monomial_spec(2), g);
  const ComplexTorsion psi = complex_torsion(cf.torsion);
  const ComplexField want = graph_psi(g);
  CHECK((psi.psi.interior - want.interior).array().abs().maxCoeff() < 1e-13);
  CHECK((psi.psi.boundary - want.boundary).array().abs().maxCoeff() < 1e-13);
}

TEST_CASE("tb_operator against the constant oracle") {
  // T_B[1](w) = w-bar for |w| <= 1 and 1/w outside.
  const DiscGrid g = build_grid(32, 64);
  const ComplexField one = sample_complex(g, [](double, double) { return 1.0; });

  Eigen::VectorXcd targets(g.num_interior() + 5);
  for (int i = 0; i < g.num_interior(); ++i) targets[i] = Complex(g.u[i], g.v[i]);
  targets[g.num_interior() + 0] = Complex(1.5, 0.0);
  targets[g.num_interior() + 1] = Complex(0.0, -2.0);
  targets[g.num_interior() + 2] = Complex(-1.2, 1.2);
  targets[g.num_interior() + 3] = Complex(3.0, 0.5);
  targets[g.num_interior() + 4] = Complex(1.05, 0.0);

  const Eigen::VectorXcd got = tb_operator(g, one, targets);
  for (int i = 0; i < g.num_interior(); ++i)
    CHECK(std::abs(got[i] - std::conj(targets[i])) < 1e-12);
  for (int i = g.num_interior(); i < targets.size(); ++i)
    CHECK(std::abs(got[i] - 1.0 / targets[i]) < 1e-12);
}

TEST_CASE("tb_operator converges on T_B[zeta]") {
  // T_B[zeta](w) = |w|^2 - 1 inside the disc, 0 outside.
  auto err = [](const DiscGrid& g) {
    const ComplexField f = sample_complex(g, [](double u, double v) { return Complex(u, v); });
    Eigen::VectorXcd targets(g.num_interior() + 2);
    for (int i = 0; i < g.num_interior(); ++i) targets[i] = Complex(g.u[i], g.v[i]);
    targets[g.num_interior()] = Complex(1.7, -0.4);
    targets[g.num_interior() + 1] = Complex(-0.3, 2.1);
    const Eigen::VectorXcd got = tb_operator(g, f, targets);
    double e = 0.0;
    for (int i = 0; i < g.num_interior(); ++i) {
      const double r2 = std::norm(targets[i]);
      e = std::max(e, std::abs(got[i] - Complex(r2 - 1.0, 0.0)));
    }
    for (int i = g.num_interior(); i < targets.size(); ++i)
      e = std::max(e, std::abs(got[i]));
    return e;
  };
  const std::vector<double> errors = refinement_errors(8, 16, 3, err);
  CHECK(errors.back() < 1e-3);
  CHECK(observed_order(errors) >= 1.6);
}

TEST_CASE("pb_operator on an imaginary constant") {
  // For constant c, T_B[zeta c] vanishes outside the disc, so
  // P_B[c](w) = c w-bar; with c imaginary, Re[w P_B[c]] = 0.
  const DiscGrid g = build_grid(32, 64);
  const ComplexField f = sample_complex(g, [](double, double) { return kI; });
  const ComplexField got = pb_operator(g, f);
  for (int i = 0; i < g.num_interior(); ++i)
    CHECK(std::abs(got.interior[i] - kI * Complex(g.u[i], -g.v[i])) < 5e-3);
  for (int k = 0; k < g.n_theta; ++k)
    CHECK(std::abs(got.boundary[k] - kI * Complex(g.bu[k], -g.bv[k])) < 5e-3);

  ComplexTorsion psi;
  psi.psi = got;
  CHECK(rh_boundary_residual(psi, g).abs().maxCoeff() < 5e-3);
}

TEST_CASE("rh_solve recovers the graph torsion") {
  auto err = [](const DiscGrid& g) {
    const ComplexTorsion got = rh_solve(graph_s(g), g);
    const ComplexField want = graph_psi(g);
    double e = (got.psi.interior - want.interior).array().abs().maxCoeff();
    e = std::max(e, (got.psi.boundary - want.boundary).array().abs().maxCoeff());
    return e;
  };
  const std::vector<double> errors = refinement_errors(16, 32, 3, err);
  CHECK(errors.back() < 5e-3);
  CHECK(errors[2] < errors[1]);
  CHECK(errors[1] < errors[0]);
}

TEST_CASE("cr_residual of the closed-form solution converges") {
  auto err = [](const DiscGrid& g) {
    ComplexTorsion psi;
    psi.psi = graph_psi(g);
    return cr_residual(psi, graph_s(g), g).interior.array().abs().maxCoeff();
  };
  CHECK(observed_order(refinement_errors(32, 64, 3, err)) >= 1.8);
}

TEST_CASE("rh_boundary_residual vanishes for the closed form") {
  const DiscGrid g = build_grid(16, 32);
  ComplexTorsion psi;
  psi.psi = graph_psi(g);
  CHECK(rh_boundary_residual(psi, g).abs().maxCoeff() < 1e-14);
}

TEST_CASE("elementary boundary identity") {
  const DiscGrid g = build_grid(32, 64);
  const ComplexField f = sample_complex(g, [](double u, double v) {
    return Complex(std::sin(u), u * v);
  });
  CHECK(elementary_identity_check(f, g) < 5e-3);
}

TEST_CASE("sup_bound_report for the graph of w^2") {
  const DiscGrid g = build_grid(64, 128);
  ComplexTorsion psi;
  psi.psi = graph_psi(g);
  const ScalarField s = graph_s(g);

  const BoundReport inf = sup_bound_report(psi, s, std::numeric_limits<double>::infinity(), g);
  // sup |Psi| = max 4r/(1+4r^2) = 1 at r = 1/2; s_inf = 8.
  CHECK(inf.sup_psi == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(inf.s_p == doctest::Approx(8.0).epsilon(1e-3));
  CHECK(inf.ratio == doctest::Approx(0.125).epsilon(2e-3));

  const BoundReport p4 = sup_bound_report(psi, s, 4.0, g);
  CHECK(p4.s_p > 0.0);
  CHECK(p4.s_p < inf.s_p * std::pow(kPi, 0.25) + 1e-9);

  // Ratio is invariant under S -> lambda S, Psi -> lambda Psi when p = inf.
  ComplexTorsion spsi;
  spsi.psi.interior = 10.0 * psi.psi.interior;
  spsi.psi.boundary = 10.0 * psi.psi.boundary;
  ScalarField ss;
  ss.interior = 10.0 * s.interior;
  ss.boundary = 10.0 * s.boundary;
  const BoundReport scaled = sup_bound_report(spsi, ss, std::numeric_limits<double>::infinity(), g);
  CHECK(scaled.ratio == doctest::Approx(inf.ratio).epsilon(1e-12));

  CHECK_THROWS_AS(sup_bound_report(psi, s, 2.0, g), std::invalid_argument);
}
