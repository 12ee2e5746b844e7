#include <doctest.h>

#include <cmath>
#include <random>

#include "confol/symplectic.hpp"

using namespace confol;

namespace {

ChartPtr t3() {
  return make_chart("t3", {"x", "y", "z"}, {{0, 1}, {0, 1}, {0, 1}},
                    {true, true, true});
}

ChartPtr r4() {
  return make_chart("r4", {"x1", "y1", "x2", "y2"},
                    {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}});
}

KForm standard_symplectic(const ChartPtr& chart) {
  KForm w(chart, 2);
  w.add_term({0, 1}, ScalarExpr::constant(1, chart));
  w.add_term({2, 3}, ScalarExpr::constant(1, chart));
  return w;
}

VectorFieldChart radial_half(const ChartPtr& chart) {
  std::vector<ScalarExpr> comps;
  auto half = ScalarExpr::constant(Rational(1, 2), chart);
  for (int i = 0; i < 4; ++i)
    comps.push_back(half * ScalarExpr::var(chart->variable(i), chart));
  return VectorFieldChart(chart, comps);
}

}  // namespace

TEST_CASE("product filling form on the flat torus") {
  auto chart = t3();
  auto alpha = parse_form_literal("dz", chart);
  VectorFieldChart v(chart, {ScalarExpr::constant(0, chart),
                             ScalarExpr::constant(0, chart),
                             ScalarExpr::constant(1, chart)});
  auto vol = parse_form_literal("dx^dy^dz", chart);

  auto cert = weak_filling_form(alpha, v, vol, 0.25);
  CHECK(cert.valid());
  CHECK(cert.d_omega_max == 0.0);
  CHECK(cert.min_square_density == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cert.boundary_min_bottom == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cert.boundary_min_top == doctest::Approx(1.0).epsilon(1e-12));

  // scanned eps starts at 1 and is immediately valid here
  auto scanned = weak_filling_form(alpha, v, vol, std::nullopt);
  CHECK(scanned.eps == 1.0);
  CHECK(scanned.valid());
  CHECK(scanned.min_square_density == doctest::Approx(2.0).epsilon(1e-12));

  // eps = 0 degenerates: the square vanishes, certificate invalid
  auto flat = weak_filling_form(alpha, v, vol, 0.0);
  CHECK_FALSE(flat.valid());
  CHECK(flat.min_square_density == 0.0);
}

TEST_CASE("filling form hypothesis failures carry the culprit") {
  auto chart = t3();
  auto alpha = parse_form_literal("dz", chart);
  auto vol = parse_form_literal("dx^dy^dz", chart);

  // z d/dz does not preserve the volume
  VectorFieldChart bad(chart, {ScalarExpr::constant(0, chart),
                               ScalarExpr::constant(0, chart),
                               ScalarExpr::var("z", chart)});
  CHECK_THROWS_WITH_AS(weak_filling_form(alpha, bad, vol, 0.5),
                       doctest::Contains("volume-preservation"),
                       PreconditionError);

  // d/dx is tangent to ker dz
  VectorFieldChart tangent(chart, {ScalarExpr::constant(1, chart),
                                   ScalarExpr::constant(0, chart),
                                   ScalarExpr::constant(0, chart)});
  CHECK_THROWS_WITH_AS(weak_filling_form(alpha, tangent, vol, 0.5),
                       doctest::Contains("transversality"),
                       PreconditionError);
}

TEST_CASE("dilating field check") {
  auto chart = r4();
  auto w = standard_symplectic(chart);
  auto v = radial_half(chart);
  auto good = check_dilating(v, w);
  CHECK(good.dilating);
  CHECK(good.residual <= 1e-12);

  // translation field: L_v w = 0, residual is |w| itself
  VectorFieldChart shift(chart, {ScalarExpr::constant(1, chart),
                                 ScalarExpr::constant(0, chart),
                                 ScalarExpr::constant(0, chart),
                                 ScalarExpr::constant(0, chart)});
  auto flat = check_dilating(shift, w);
  CHECK_FALSE(flat.dilating);
  CHECK(flat.residual == doctest::Approx(1.0));

  // doubling the field overshoots by exactly w
  VectorFieldChart twice(chart, {ScalarExpr::var("x1", chart),
                                 ScalarExpr::var("y1", chart),
                                 ScalarExpr::var("x2", chart),
                                 ScalarExpr::var("y2", chart)});
  auto over = check_dilating(twice, w);
  CHECK_FALSE(over.dilating);
  CHECK(over.residual == doctest::Approx(1.0));

  // non-closed omega is rejected up front
  KForm crooked(chart, 2);
  crooked.add_term({0, 1}, ScalarExpr::var("x2", chart));
  CHECK_THROWS_AS(check_dilating(v, crooked), PreconditionError);
}

TEST_CASE("induced boundary form on the round sphere") {
  auto chart = r4();
  auto w = standard_symplectic(chart);
  auto v = radial_half(chart);

  auto sphere = make_chart(
      "sphere", {"phi", "theta1", "theta2"},
      {{0.05, M_PI / 2 - 0.05}, {0, 2 * M_PI}, {0, 2 * M_PI}},
      {false, true, true});
  auto phi = ScalarExpr::var("phi", sphere);
  auto t1 = ScalarExpr::var("theta1", sphere);
  auto t2 = ScalarExpr::var("theta2", sphere);
  ChartMap embed(sphere, chart,
                 {ScalarExpr::sin(phi) * ScalarExpr::cos(t1),
                  ScalarExpr::sin(phi) * ScalarExpr::sin(t1),
                  ScalarExpr::cos(phi) * ScalarExpr::cos(t2),
                  ScalarExpr::cos(phi) * ScalarExpr::sin(t2)});

  auto report = induced_boundary_form(v, w, embed);
  CHECK(report.classification.verdict == Verdict::PositiveContact);
  CHECK(report.identity_residual <= 1e-9);

  // alpha = (sin^2 dtheta1 + cos^2 dtheta2) / 2 on the slice
  Grid grid(sphere, 5);
  grid.for_each([&](std::span<const double> p) {
    const double s = std::sin(p[0]), c = std::cos(p[0]);
    CHECK(report.alpha.coefficient({1}).eval_unchecked(p) ==
          doctest::Approx(0.5 * s * s).epsilon(1e-12));
    CHECK(report.alpha.coefficient({2}).eval_unchecked(p) ==
          doctest::Approx(0.5 * c * c).epsilon(1e-12));
  });

  // a non-dilating field trips the precondition
  VectorFieldChart shift(chart, {ScalarExpr::constant(1, chart),
                                 ScalarExpr::constant(0, chart),
                                 ScalarExpr::constant(0, chart),
                                 ScalarExpr::constant(0, chart)});
  CHECK_THROWS_AS(induced_boundary_form(shift, w, embed), PreconditionError);
}

TEST_CASE("weak domination") {
  auto chart = t3();
  auto area = parse_form_literal("dx^dy", chart);

  // the horizontal field is dominated with value exactly 1
  PlaneFieldChart horizontal(parse_form_literal("dz", chart));
  auto direct = weak_domination_check(area, horizontal);
  CHECK(direct.dominates);
  CHECK(direct.minimum == doctest::Approx(1.0).epsilon(1e-12));

  // a small tilt keeps the domination
  auto tilted = example("t3", {{"t", 0.05}});
  auto tilt = weak_domination_check(area, tilted);
  CHECK(tilt.dominates);
  CHECK(tilt.minimum > 0.9);

  // degenerate pairing: the plane spanned by d/dx, d/dz
  PlaneFieldChart vertical(parse_form_literal("dy", chart));
  auto flat = weak_domination_check(area, vertical);
  CHECK_FALSE(flat.dominates);
  CHECK(std::abs(flat.minimum) <= 1e-12);

  // dalpha dominates ker alpha on the sphere chart
  auto s3 = example("s3");
  auto dom = weak_domination_check(exterior_d(s3.form), s3);
  CHECK(dom.dominates);
}

TEST_CASE("kernel basis construction is well oriented") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a{coef(rng), coef(rng), coef(rng)};
    if (std::hypot(a[0], std::hypot(a[1], a[2])) < 0.1) continue;
    auto [u, w] = kernel_basis(a);
    // in the kernel
    CHECK(std::abs(u[0] * a[0] + u[1] * a[1] + u[2] * a[2]) < 1e-9);
    CHECK(std::abs(w[0] * a[0] + w[1] * a[1] + w[2] * a[2]) < 1e-9);
    // orthonormal
    CHECK(std::abs(u[0] * w[0] + u[1] * w[1] + u[2] * w[2]) < 1e-9);
    // positively oriented against a
    const double det = u[0] * (w[1] * a[2] - w[2] * a[1]) -
                       u[1] * (w[0] * a[2] - w[2] * a[0]) +
                       u[2] * (w[0] * a[1] - w[1] * a[0]);
    CHECK(det > 0);
  }
  CHECK_THROWS_AS(kernel_basis({0.0, 0.0, 0.0}), PreconditionError);
}

TEST_CASE("domination verdict is invariant under rescaling and rotation") {
  auto chart = t3();
  auto area = parse_form_literal("dx^dy", chart);
  PlaneFieldChart pf(parse_form_literal("dz", chart));
  auto base = weak_domination_check(area, pf);

  // positive functional rescaling of the defining form
  auto scale = parse_expr("2 + sin(2*pi*x)", chart);
  PlaneFieldChart scaled(pf.form.scaled(scale));
  CHECK(weak_domination_check(area, scaled).dominates == base.dominates);

  // rotating an oriented basis does not change the pairing value
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  auto [u, w] = kernel_basis({0.0, 0.0, 1.0});
  const double p[3] = {0.25, 0.5, 0.5};
  const double reference =
      area.apply(std::span<const double>(p, 3), {u, w});
  for (int trial = 0; trial < 20; ++trial) {
    const double th = angle(rng);
    std::vector<double> ru(3), rw(3);
    for (int i = 0; i < 3; ++i) {
      ru[i] = std::cos(th) * u[i] + std::sin(th) * w[i];
      rw[i] = -std::sin(th) * u[i] + std::cos(th) * w[i];
    }
    CHECK(area.apply(std::span<const double>(p, 3), {ru, rw}) ==
          doctest::Approx(reference).epsilon(1e-12));
  }
}
