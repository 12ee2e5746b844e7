#include <doctest.h>

#include <cmath>
#include <random>

#include "confol/forms.hpp"

using namespace confol;

namespace {

ChartPtr xyz() {
  return make_chart("xyz", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
}

ChartPtr cyl() {
  return make_chart("cyl", {"r", "theta", "z"},
                    {{0, M_PI}, {0, 2 * M_PI}, {0, 1}}, {false, true, true},
                    {{"r", 0.0}});
}

ChartPtr c2_polar() {
  return make_chart("c2", {"r1", "theta1", "r2", "theta2"},
                    {{0, 1.2}, {0, 2 * M_PI}, {0, 1.2}, {0, 2 * M_PI}},
                    {false, true, false, true},
                    {{"r1", 0.0}, {"r2", 0.0}});
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

bool zero_on_grid(const KForm& f, int n = 7, double tol = 1e-9) {
  return max_norm_on_grid(f, Grid(f.chart(), n)) <= tol;
}

bool equal_on_grid(const KForm& a, const KForm& b, int n = 7,
                   double tol = 1e-9) {
  return zero_on_grid(a - b, n, tol);
}

}  // namespace

TEST_CASE("exterior derivative of the basic forms") {
  auto chart = xyz();
  auto dz = parse_form_literal("dz", chart);
  CHECK(exterior_d(dz).is_structurally_zero());

  // spiral 1-form in cylindrical coordinates
  auto c = cyl();
  auto alpha = parse_form_literal("cos(r)*dz + r*sin(r)*dtheta", c);
  auto da = exterior_d(alpha);
  auto expected =
      parse_form_literal("-sin(r)*dr^dz + (sin(r) + r*cos(r))*dr^dtheta", c);
  CHECK(equal_on_grid(da, expected));
}

TEST_CASE("exterior derivative of the round-sphere primitive") {
  auto chart = c2_polar();
  auto alpha = parse_form_literal("r1^2*dtheta1 + r2^2*dtheta2", chart);
  auto expected =
      parse_form_literal("2*r1*dr1^dtheta1 + 2*r2*dr2^dtheta2", chart);
  CHECK(equal_on_grid(exterior_d(alpha), expected, 5));
}

TEST_CASE("exterior derivative rejects top degree") {
  auto chart = xyz();
  auto vol = parse_form_literal("dx^dy^dz", chart);
  CHECK_THROWS_AS(exterior_d(vol), PreconditionError);
}

TEST_CASE("wedge basics") {
  auto chart = xyz();
  auto alpha = parse_form_literal("dz - y*dx", chart);
  auto density = wedge(alpha, exterior_d(alpha));
  // dz - y dx against its derivative gives exactly the volume form
  CHECK(density.coefficient({0, 1, 2}).is_constant_one());

  auto dz = parse_form_literal("dz", chart);
  CHECK(wedge(dz, dz).is_structurally_zero());

  auto c = cyl();
  auto lutz = parse_form_literal("cos(r)*dz + r*sin(r)*dtheta", c);
  auto lutz_density = wedge(lutz, exterior_d(lutz));
  auto expected = parse_form_literal("(r + sin(r)*cos(r))*dr^dtheta^dz", c);
  CHECK(equal_on_grid(lutz_density, expected));
}

TEST_CASE("wedge is graded-commutative") {
  auto chart = xyz();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> num(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    KForm a(chart, 1), b(chart, 2);
    for (int i = 0; i < 3; ++i)
      a.add_term({i}, ScalarExpr::constant(num(rng), chart) *
                          ScalarExpr::var("y", chart));
    b.add_term({0, 1}, ScalarExpr::constant(num(rng), chart));
    b.add_term({1, 2}, ScalarExpr::var("x", chart));
    // deg 1 * deg 2: a^b = (-1)^2 b^a
    CHECK(equal_on_grid(wedge(a, b), wedge(b, a)));
  }
}

TEST_CASE("interior product basics") {
  auto chart = xyz();
  VectorFieldChart ddz(chart, {ScalarExpr::constant(0, chart),
                               ScalarExpr::constant(0, chart),
                               ScalarExpr::constant(1, chart)});
  auto vol = parse_form_literal("dx^dy^dz", chart);
  auto area = parse_form_literal("dx^dy", chart);
  CHECK(equal_on_grid(interior_product(ddz, vol), area));
  CHECK(interior_product(ddz, area).is_structurally_zero());
  KForm zero_form(chart, 0);
  zero_form.add_term({}, ScalarExpr::constant(1, chart));
  CHECK_THROWS_AS(interior_product(ddz, zero_form), PreconditionError);

  // i_v(w^w) = 2 (i_v w)^w for the standard symplectic pair
  auto r = r4();
  auto w = standard_symplectic(r);
  auto v = radial_half(r);
  auto lhs = interior_product(v, wedge(w, w));
  auto rhs = wedge(interior_product(v, w), w)
                 .scaled(ScalarExpr::constant(2, r));
  CHECK(equal_on_grid(lhs, rhs, 5));
}

TEST_CASE("pullback basics") {
  auto chart = xyz();
  auto plane = make_chart("uv", {"u", "v"}, {{-1, 1}, {-1, 1}});
  std::vector<ScalarExpr> comps{ScalarExpr::var("u", plane),
                                ScalarExpr::var("v", plane),
                                ScalarExpr::constant(0, plane)};
  ChartMap disk(plane, chart, comps);

  auto dz = parse_form_literal("dz", chart);
  CHECK(pullback(disk, dz).is_structurally_zero());

  auto area = parse_form_literal("dx^dy", chart);
  auto du_dv = parse_form_literal("du^dv", plane);
  CHECK(equal_on_grid(pullback(disk, area), du_dv));
}

TEST_CASE("pullback of the sphere density is positive") {
  auto c2 = c2_polar();
  auto sphere = make_chart(
      "sphere", {"phi", "theta1", "theta2"},
      {{0.05, M_PI / 2 - 0.05}, {0, 2 * M_PI}, {0, 2 * M_PI}},
      {false, true, true});
  std::vector<ScalarExpr> comps{
      ScalarExpr::sin(ScalarExpr::var("phi", sphere)),
      ScalarExpr::var("theta1", sphere),
      ScalarExpr::cos(ScalarExpr::var("phi", sphere)),
      ScalarExpr::var("theta2", sphere)};
  ChartMap embed(sphere, c2, comps);

  auto alpha = parse_form_literal("r1^2*dtheta1 + r2^2*dtheta2", c2);
  auto three_form = wedge(alpha, exterior_d(alpha));
  auto restricted = pullback(embed, three_form);
  auto density = restricted.coefficient({0, 1, 2});

  Grid grid(sphere, 9);
  grid.for_each([&](std::span<const double> p) {
    CHECK(density.eval_unchecked(p) > 1e-3);
    // closed form: sin(2 phi)
    CHECK(density.eval_unchecked(p) ==
          doctest::Approx(std::sin(2 * p[0])).epsilon(1e-9));
  });
}

TEST_CASE("pullback commutes with d and wedge") {
  auto chart = xyz();
  auto plane = make_chart("uv", {"u", "v"}, {{-0.9, 0.9}, {-0.9, 0.9}});
  auto u = ScalarExpr::var("u", plane);
  auto v = ScalarExpr::var("v", plane);
  std::vector<ScalarExpr> comps{u * v, u + v,
                                ScalarExpr::sin(u) * ScalarExpr::cos(v)};
  ChartMap m(plane, chart, comps);

  auto alpha = parse_form_literal("y*dx + x*z*dz", chart);
  auto beta = parse_form_literal("cos(x)*dy", chart);
  CHECK(equal_on_grid(pullback(m, exterior_d(alpha)),
                      exterior_d(pullback(m, alpha)), 9, 1e-8));
  CHECK(equal_on_grid(pullback(m, wedge(alpha, beta)),
                      wedge(pullback(m, alpha), pullback(m, beta)), 9, 1e-8));
}

TEST_CASE("lie derivative along translations and dilations") {
  auto chart = xyz();
  VectorFieldChart ddz(chart, {ScalarExpr::constant(0, chart),
                               ScalarExpr::constant(0, chart),
                               ScalarExpr::constant(1, chart)});
  auto vol = parse_form_literal("dx^dy^dz", chart);
  CHECK(lie_derivative(ddz, vol).is_structurally_zero());
  // L_v(i_v vol) = 0, the closedness computation of the product filling
  CHECK(lie_derivative(ddz, interior_product(ddz, vol)).is_structurally_zero());

  auto r = r4();
  auto w = standard_symplectic(r);
  auto v = radial_half(r);
  CHECK(equal_on_grid(lie_derivative(v, w), w, 5));
}

TEST_CASE("surface patch immersion check") {
  auto chart = xyz();
  auto plane = make_chart("uv", {"u", "v"}, {{-1, 1}, {-1, 1}});
  auto u = ScalarExpr::var("u", plane);
  std::vector<ScalarExpr> good{u, ScalarExpr::var("v", plane),
                               ScalarExpr::constant(0, plane)};
  SurfacePatch ok(ChartMap(plane, chart, good));
  CHECK_NOTHROW(ok.check_immersion());

  // collapses the v direction
  std::vector<ScalarExpr> bad{u, u, ScalarExpr::constant(0, plane)};
  SurfacePatch degenerate(ChartMap(plane, chart, bad));
  CHECK_THROWS_AS(degenerate.check_immersion(), PreconditionError);
}

TEST_CASE("form literal parsing") {
  auto chart = xyz();
  auto f = parse_form_literal("dz - y*dx", chart);
  CHECK(f.degree() == 1);
  CHECK(f.coefficient({2}).is_constant_one());
  CHECK(f.coefficient({0}).same_tree(-ScalarExpr::var("y", chart)));

  auto g = parse_form_literal("dx^dy + 2*dy^dz", chart);
  CHECK(g.degree() == 2);
  CHECK_THROWS_AS(parse_form_literal("dz + dx^dy", chart), ParseError);
  CHECK_THROWS_AS(parse_form_literal("dw", chart), ParseError);
}

TEST_CASE("product chart lift and slices") {
  auto base = xyz();
  auto product = product_with_interval(base, "t", {-1, 1});
  REQUIRE(product->dim() == 4);
  CHECK(product->variable(0) == "t");

  auto area = parse_form_literal("dx^dy", base);
  auto lifted = lift_to_product(area, product);
  CHECK(lifted.degree() == 2);
  CHECK(lifted.coefficient({1, 2}).is_constant_one());

  auto back = pullback(interval_slice(base, product, 1.0), lifted);
  CHECK(equal_on_grid(back, area));
}
