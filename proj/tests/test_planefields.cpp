#include <doctest.h>

#include <cmath>
#include <random>

#include "confol/planefields.hpp"

using namespace confol;

TEST_CASE("catalog classification") {
  CHECK(classify(example("xi1"), 9).verdict == Verdict::Foliation);
  CHECK(classify(example("xi2"), 9).verdict == Verdict::PositiveContact);
  CHECK(classify(example("xi3"), 9).verdict == Verdict::NegativeContact);

  auto lutz = classify(example("lutz", {{"rmin", 0.1}}), 15);
  CHECK(lutz.verdict == Verdict::PositiveContact);
  // density r + sin r cos r, minimum at the inner radius
  CHECK(lutz.min_density ==
        doctest::Approx(0.1 + std::sin(0.1) * std::cos(0.1)).epsilon(1e-6));

  auto reeb = classify(example("reeb"), 15);
  CHECK(reeb.verdict == Verdict::Foliation);
  CHECK(std::abs(reeb.max_density) <= 1e-9);
  CHECK(std::abs(reeb.min_density) <= 1e-9);

  CHECK(classify(example("t3", {{"t", 0.2}}), 9).verdict ==
        Verdict::PositiveContact);
  CHECK(classify(example("t3", {{"t", -0.2}}), 9).verdict ==
        Verdict::NegativeContact);
  CHECK(classify(example("t3", {{"t", 0.0}}), 9).verdict ==
        Verdict::Foliation);
  CHECK(classify(example("s3"), 9).verdict == Verdict::PositiveContact);

  CHECK_THROWS_AS(example("nope"), Error);
}

TEST_CASE("t3 density scales with the twist frequency") {
  auto r1 = classify(example("t3", {{"t", 0.2}, {"n", 1}}), 9);
  auto r2 = classify(example("t3", {{"t", 0.2}, {"n", 2}}), 9);
  CHECK(r1.min_density == doctest::Approx(2 * M_PI * 0.04).epsilon(1e-9));
  CHECK(r2.min_density == doctest::Approx(4 * M_PI * 0.04).epsilon(1e-9));
}

TEST_CASE("normal form kernel and the slope criterion") {
  auto chart = make_chart("xyz", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
  auto y = ScalarExpr::var("y", chart);

  auto pos = classify(normal_form(y), 9);
  CHECK(pos.verdict == Verdict::PositiveContact);
  auto neg = classify(normal_form(-y), 9);
  CHECK(neg.verdict == Verdict::NegativeContact);
  auto fol = classify(normal_form(ScalarExpr::constant(0, chart)), 9);
  CHECK(fol.verdict == Verdict::Foliation);
}

TEST_CASE("property: normal-form verdict matches the slope derivative sign") {
  auto chart = make_chart("xyz", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> coef(-3, 3);
  auto x = ScalarExpr::var("x", chart);
  auto y = ScalarExpr::var("y", chart);
  auto z = ScalarExpr::var("z", chart);
  for (int trial = 0; trial < 60; ++trial) {
    auto a = ScalarExpr::constant(coef(rng), chart) +
             ScalarExpr::constant(coef(rng), chart) * x +
             ScalarExpr::constant(coef(rng), chart) * y +
             ScalarExpr::constant(coef(rng), chart) * z +
             ScalarExpr::constant(coef(rng), chart) * x * y +
             ScalarExpr::constant(coef(rng), chart) * ScalarExpr::pow(y, 2);
    auto report = classify(normal_form(a), 7);
    auto ay = a.partial("y");
    double mn = 1e300, mx = -1e300;
    Grid grid(chart, 7);
    grid.for_each([&](std::span<const double> p) {
      const double v = ay.eval_unchecked(p);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    });
    CHECK(report.min_density == doctest::Approx(mn).epsilon(1e-12));
    CHECK(report.max_density == doctest::Approx(mx).epsilon(1e-12));
  }
}

TEST_CASE("classification is invariant under alpha -> -alpha") {
  for (const auto& name : {"xi1", "xi2", "xi3"}) {
    auto pf = example(name);
    PlaneFieldChart flipped(-pf.form, "flipped");
    CHECK(classify(flipped, 7).verdict == classify(pf, 7).verdict);
  }
}

TEST_CASE("swapping two chart variables flips the verdict") {
  auto direct = make_chart("a", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
  auto swapped = make_chart("b", {"y", "x", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
  auto on_direct = classify(
      PlaneFieldChart(parse_form_literal("dz - y*dx", direct)), 7);
  auto on_swapped = classify(
      PlaneFieldChart(parse_form_literal("dz - y*dx", swapped)), 7);
  CHECK(on_direct.verdict == Verdict::PositiveContact);
  CHECK(on_swapped.verdict == Verdict::NegativeContact);
}

TEST_CASE("classify rejects a vanishing 1-form") {
  auto chart = make_chart("xyz", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
  KForm f(chart, 1);
  f.add_term({0}, ScalarExpr::var("x", chart));
  CHECK_THROWS_AS(classify(PlaneFieldChart(std::move(f)), 9),
                  PreconditionError);
}

TEST_CASE("contact region") {
  // globally contact: every grid point
  auto all = contact_region(example("xi2"), 7);
  CHECK(all.size() == 7 * 7 * 7);
  // foliation: empty
  CHECK(contact_region(example("xi1"), 7).empty());

  // slope increasing only near y = 1
  auto chart = make_chart("N", {"x", "y", "z"}, {{-1, 1}, {0, 1}, {-1, 1}});
  auto y = ScalarExpr::var("y", chart);
  auto three_quarters = ScalarExpr::constant(Rational(3, 4), chart);
  auto a = ScalarExpr::pow(ScalarExpr::pos(y - three_quarters), 3);
  auto region = contact_region(normal_form(a), 9);
  CHECK(!region.empty());
  auto ay = a.partial("y");
  for (const auto& p : region) {
    CHECK(p[1] > 0.75);
    CHECK(ay.eval_unchecked(p) >= 1e-6);
  }
  // and it is exactly the set where the derivative clears the margin
  std::size_t expected = 0;
  Grid grid(chart, 9);
  grid.for_each([&](std::span<const double> p) {
    if (ay.eval_unchecked(p) >= 1e-6) ++expected;
  });
  CHECK(region.size() == expected);
}

TEST_CASE("adjunction bound checker") {
  CHECK(adjunction_check(0, 0));
  CHECK_FALSE(adjunction_check(1, 0));
  CHECK_FALSE(adjunction_check(1, 1));
  CHECK(adjunction_check(0, 1));
  // equality case 2g - 2 at genus 3
  CHECK(adjunction_check(4, 3));
  CHECK_FALSE(adjunction_check(5, 3));
  CHECK(adjunction_check(-4, 3));
}
