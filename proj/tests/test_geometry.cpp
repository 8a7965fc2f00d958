#include <doctest.h>

#include "test_util.hpp"
#include "torsion/geometry.hpp"
#include "torsion/graphs.hpp"

using namespace torsion;
using test::kPi;
using test::observed_order;
using test::refinement_errors;

namespace {

ImmersionDescriptor plane_descriptor() {
  ImmersionDescriptor d;
  d.position = [](double u, double v) { return Eigen::Vector4d(u, v, 0.0, 0.0); };
  d.d_u = [](double, double) { return Eigen::Vector4d(1.0, 0.0, 0.0, 0.0); };
  d.d_v = [](double, double) { return Eigen::Vector4d(0.0, 1.0, 0.0, 0.0); };
  return d;
}

}  // namespace

TEST_CASE("sample_immersion metric for the plane") {
  const DiscGrid g = build_grid(8, 16);
  const ImmersionSample s = sample_immersion(plane_descriptor(), g);
  CHECK((s.g11.interior.array() - 1.0).abs().maxCoeff() < 1e-14);
  CHECK(s.g12.interior.array().abs().maxCoeff() < 1e-14);
  CHECK((s.g22.interior.array() - 1.0).abs().maxCoeff() < 1e-14);
  CHECK((s.W.interior.array() - 1.0).abs().maxCoeff() < 1e-14);
}

TEST_CASE("area element of holomorphic graphs") {
  const DiscGrid g = build_grid(8, 16);
  // (w, w): |Phi'| = 1, so W = 2 everywhere.
  const ImmersionSample lin = sample_immersion(graph_immersion(monomial_spec(1)), g);
  CHECK((lin.W.interior.array() - 2.0).abs().maxCoeff() < 1e-14);

  // (w, w^2): W = 1 + 4 r^2.
  const ImmersionSample quad = sample_immersion(graph_immersion(monomial_spec(2)), g);
  for (int i = 0; i < g.num_interior(); ++i) {
    const double r2 = g.u[i] * g.u[i] + g.v[i] * g.v[i];
    CHECK(quad.W.interior[i] == doctest::Approx(1.0 + 4.0 * r2).epsilon(1e-13));
  }
}

TEST_CASE("check_conformality") {
  const DiscGrid g = build_grid(8, 16);
  CHECK(check_conformality(sample_immersion(plane_descriptor(), g)).pass);
  CHECK(check_conformality(sample_immersion(graph_immersion(monomial_spec(3)), g)).pass);

  ImmersionDescriptor bad;
  bad.position = [](double u, double v) { return Eigen::Vector4d(u, v, u * u, 0.0); };
  bad.d_u = [](double u, double) { return Eigen::Vector4d(1.0, 0.0, 2.0 * u, 0.0); };
  bad.d_v = [](double, double) { return Eigen::Vector4d(0.0, 1.0, 0.0, 0.0); };
  const ConformalityReport rep = check_conformality(sample_immersion(bad, g));
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_conformal_residual > 0.1);
}

TEST_CASE("build_normal_frame on the plane") {
  const DiscGrid g = build_grid(4, 8);
  const NormalSection n = build_normal_frame(sample_immersion(plane_descriptor(), g));
  for (int i = 0; i < g.num_interior(); ++i) {
    CHECK(n.N1.interior.row(i).isApprox(Eigen::RowVector4d(0, 0, 1, 0), 1e-14));
    CHECK(n.N2.interior.row(i).isApprox(Eigen::RowVector4d(0, 0, 0, 1), 1e-14));
  }
}

TEST_CASE("build_normal_frame reproduces the graph section") {
  const DiscGrid g = build_grid(8, 16);
  const HolomorphicGraphSpec spec = monomial_spec(2);
  const NormalSection numeric = build_normal_frame(sample_immersion(graph_immersion(spec), g));
  const NormalSection closed = graph_section(spec, g);
  CHECK((numeric.N1.interior - closed.N1.interior).array().abs().maxCoeff() < 1e-12);
  CHECK((numeric.N2.interior - closed.N2.interior).array().abs().maxCoeff() < 1e-12);
  CHECK((numeric.N1.boundary - closed.N1.boundary).array().abs().maxCoeff() < 1e-12);
}

TEST_CASE("frame invariants: orthonormality and tangency") {
  const DiscGrid g = build_grid(8, 16);
  const ImmersionSample s = sample_immersion(graph_immersion(monomial_spec(3)), g);
  const NormalSection n = build_normal_frame(s);
  for (int i = 0; i < g.num_interior(); ++i) {
    CHECK(n.N1.interior.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(n.N2.interior.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(n.N1.interior.row(i).dot(n.N2.interior.row(i))) < 1e-12);
    CHECK(std::abs(n.N1.interior.row(i).dot(s.Xu.interior.row(i))) < 1e-12);
    CHECK(std::abs(n.N2.interior.row(i).dot(s.Xv.interior.row(i))) < 1e-12);
  }
}

TEST_CASE("frame degeneracy is reported") {
  const DiscGrid g = build_grid(4, 8);
  ImmersionDescriptor degenerate;
  degenerate.position = [](double u, double) { return Eigen::Vector4d(u, u, 0.0, 0.0); };
  degenerate.d_u = [](double, double) { return Eigen::Vector4d(1.0, 1.0, 0.0, 0.0); };
  degenerate.d_v = [](double, double) { return Eigen::Vector4d(1.0, 1.0, 0.0, 0.0); };
  CHECK_THROWS_AS(build_normal_frame(sample_immersion(degenerate, g)), ValidationError);
}

TEST_CASE("torsion coefficients of the plane vanish") {
  const DiscGrid g = build_grid(8, 16);
  const TorsionField t =
      torsion_coefficients(build_normal_frame(sample_immersion(plane_descriptor(), g)), g);
  CHECK(t.T11.interior.array().abs().maxCoeff() < 1e-12);
  CHECK(t.T12.interior.array().abs().maxCoeff() < 1e-12);
}

TEST_CASE("numeric torsions converge to the closed form") {
  // Oracle for (w, w^2): T11 = 4v / (1 + 4r^2), T12 = -4u / (1 + 4r^2).
  auto err = [](const DiscGrid& g) {
    const NormalSection frame =
        build_normal_frame(sample_immersion(graph_immersion(monomial_spec(2)), g));
    const TorsionField t = torsion_coefficients(frame, g);
    double e = 0.0;
    for (int i = 0; i < g.num_interior(); ++i) {
      const double w = 1.0 + 4.0 * (g.u[i] * g.u[i] + g.v[i] * g.v[i]);
      e = std::max(e, std::abs(t.T11.interior[i] - 4.0 * g.v[i] / w));
      e = std::max(e, std::abs(t.T12.interior[i] + 4.0 * g.u[i] / w));
    }
    return e;
  };
  CHECK(observed_order(refinement_errors(8, 16, 3, err)) >= 1.8);
}

TEST_CASE("torsion antisymmetry via the product rule") {
  const DiscGrid g = build_grid(64, 128);
  const NormalSection n = build_normal_frame(sample_immersion(graph_immersion(monomial_spec(2)), g));
  // (d_u N1) . N2 + N1 . (d_u N2) = d_u (N1 . N2) = 0 up to truncation error.
  auto deriv_dot = [&](const Vec4Field& a, const Vec4Field& b) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(g.num_interior());
    for (int c = 0; c < 4; ++c) {
      ScalarField comp;
      comp.interior = a.interior.col(c);
      out += differentiate(g, comp, Dir::U).interior.cwiseProduct(b.interior.col(c));
    }
    return out;
  };
  const Eigen::VectorXd total = deriv_dot(n.N1, n.N2) + deriv_dot(n.N2, n.N1);
  CHECK(total.array().abs().maxCoeff() < 1e-2);
}

TEST_CASE("normal curvature closed form and rotation invariance") {
  auto err = [](const DiscGrid& g) {
    const GraphClosedForms cf = graph_torsion_closed_form(monomial_spec(2), g);
    const ScalarField s = normal_curvature(cf.torsion, g);
    double e = 0.0;
    for (int i = 0; i < g.num_interior(); ++i) {
      const double w = 1.0 + 4.0 * (g.u[i] * g.u[i] + g.v[i] * g.v[i]);
      e = std::max(e, std::abs(s.interior[i] - 8.0 / (w * w)));
    }
    return e;
  };
  CHECK(observed_order(refinement_errors(32, 64, 3, err)) >= 1.8);
  CHECK(err(build_grid(128, 256)) < 2e-3);
}

TEST_CASE("total torsion of (w, w^2)") {
  // Oracle: 64 pi int_0^1 r^3 / (1 + 4 r^2)^2 dr = 2 pi (ln 5 - 4/5).
  const double want = 2.0 * kPi * (std::log(5.0) - 0.8);
  const DiscGrid g = build_grid(64, 128);
  const GraphClosedForms cf = graph_torsion_closed_form(monomial_spec(2), g);
  CHECK(total_torsion(cf.torsion, g) == doctest::Approx(want).epsilon(1e-3));
  CHECK(total_torsion(cf.torsion, g) >= 0.0);
}

TEST_CASE("both forms of the total torsion agree") {
  const DiscGrid g = build_grid(16, 32);
  const ImmersionSample s = sample_immersion(graph_immersion(monomial_spec(2)), g);
  const GraphClosedForms cf = graph_torsion_closed_form(monomial_spec(2), g);
  const double simplified = total_torsion(cf.torsion, g);
  const double metric = total_torsion_metric(cf.torsion, s, g);
  CHECK(simplified == doctest::Approx(metric).epsilon(1e-14));
}
