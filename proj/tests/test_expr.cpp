#include <doctest.h>

#include <cmath>
#include <random>

#include "confol/expr.hpp"

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

}  // namespace

TEST_CASE("parse atoms and simplification rules") {
  auto chart = xyz();
  auto e = parse_expr("y", chart);
  CHECK(e.str() == "y");

  auto c = cyl();
  auto simplified = parse_expr("cos(r)*1 + 0", c);
  CHECK(simplified.same_tree(parse_expr("cos(r)", c)));

  auto prod = parse_expr("r*sin(r)", c);
  const double v = prod.eval(std::vector<double>{M_PI / 2, 0.0, 0.5});
  CHECK(v == doctest::Approx(M_PI / 2));
}

TEST_CASE("parse errors carry a position") {
  auto chart = xyz();
  CHECK_THROWS_AS(parse_expr("x + ", chart), ParseError);
  CHECK_THROWS_AS(parse_expr("w + 1", chart), ParseError);
  CHECK_THROWS_AS(parse_expr("sin(x", chart), ParseError);
  try {
    parse_expr("x + q", chart);
    CHECK(false);
  } catch (const ParseError& err) {
    CHECK(err.pos == 4);
  }
}

TEST_CASE("eval basics") {
  auto chart = xyz();
  CHECK(parse_expr("1", chart).eval(std::vector<double>{0, 0, 0}) == 1.0);
  CHECK(parse_expr("sin(x)", chart).eval(std::vector<double>{M_PI / 2 - 0.6, 0, 0}) ==
        doctest::Approx(std::sin(M_PI / 2 - 0.6)));
  CHECK(parse_expr("1 - (x^2 + y^2)", chart)
            .eval(std::vector<double>{0.6, 0.8, 0.0}) ==
        doctest::Approx(0.0));
}

TEST_CASE("eval refuses off-domain points and singular loci") {
  auto chart = xyz();
  CHECK_THROWS_AS(parse_expr("x", chart).eval(std::vector<double>{2.0, 0, 0}),
                  DomainError);
  auto c = cyl();
  CHECK_THROWS_AS(parse_expr("r", c).eval(std::vector<double>{0.0, 0.1, 0.1}),
                  DomainError);
  // periodic coordinates wrap instead of failing
  CHECK(parse_expr("z", c).eval(std::vector<double>{1.0, 0.0, 1.25}) ==
        doctest::Approx(0.25));
}

TEST_CASE("symbolic partials") {
  auto chart = xyz();
  auto e = parse_expr("y*x", chart);
  CHECK(e.partial("y").same_tree(parse_expr("x", chart)));

  auto c = cyl();
  auto p = parse_expr("r*sin(r)", c).partial("r");
  CHECK(p.same_tree(parse_expr("sin(r) + r*cos(r)", c)));

  // the level-set function of the spiral foliation is its own z-derivative
  auto f = parse_expr("(1 - (x^2 + y^2)) * exp(z)", chart);
  CHECK(f.partial("z").same_tree(f));
}

TEST_CASE("pos/step cutoff primitives") {
  auto chart = xyz();
  auto h = parse_expr("pos(1 - x)^2", chart);
  CHECK(h.eval(std::vector<double>{0.5, 0, 0}) == doctest::Approx(0.25));
  CHECK(h.eval(std::vector<double>{1.0, 0, 0}) == 0.0);
  auto dh = h.partial("x");
  CHECK(dh.eval(std::vector<double>{0.5, 0, 0}) == doctest::Approx(-1.0));
  CHECK(dh.eval(std::vector<double>{1.0, 0, 0}) == 0.0);
}

// ----------------------------------------------------------------------
// random expression generator shared by the property tests

namespace {

ScalarExpr random_expr(std::mt19937_64& rng, const ChartPtr& chart, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  std::uniform_int_distribution<int> var(0, chart->dim() - 1);
  std::uniform_int_distribution<std::int64_t> num(-4, 4);
  switch (pick(rng)) {
    case 0:
      return ScalarExpr::constant(num(rng), chart);
    case 1:
    case 2:
      return ScalarExpr::var(chart->variable(var(rng)), chart);
    case 3:
      return random_expr(rng, chart, depth - 1) +
             random_expr(rng, chart, depth - 1);
    case 4:
      return random_expr(rng, chart, depth - 1) -
             random_expr(rng, chart, depth - 1);
    case 5:
      return random_expr(rng, chart, depth - 1) *
             random_expr(rng, chart, depth - 1);
    case 6:
      // denominator bounded away from zero
      return random_expr(rng, chart, depth - 1) /
             (ScalarExpr::constant(2, chart) +
              ScalarExpr::pow(ScalarExpr::sin(random_expr(rng, chart, depth - 2)), 2));
    case 7:
      return ScalarExpr::sin(random_expr(rng, chart, depth - 1));
    case 8:
      return ScalarExpr::cos(random_expr(rng, chart, depth - 1));
    default:
      return ScalarExpr::pow(random_expr(rng, chart, depth - 1),
                             std::uniform_int_distribution<int>(2, 3)(rng));
  }
}

}  // namespace

TEST_CASE("property: print-then-parse is the identity on trees") {
  auto chart = xyz();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    auto e = random_expr(rng, chart, 4);
    auto round = parse_expr(e.str(), chart);
    CHECK(round.same_tree(e));
  }
}

TEST_CASE("property: symbolic derivative matches central differences") {
  auto chart = xyz();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-0.8, 0.8);
  const double h = 1e-5;
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    auto e = random_expr(rng, chart, 3);
    for (const auto& v : chart->variables()) {
      auto d = e.partial(v);
      const int vi = *chart->index_of(v);
      std::vector<double> p{coord(rng), coord(rng), coord(rng)};
      auto shifted = [&](double dx) {
        auto q = p;
        q[vi] += dx;
        return e.eval(q);
      };
      const double fd = (shifted(h) - shifted(-h)) / (2 * h);
      const double sym = d.eval(p);
      const double scale = 1.0 + std::abs(sym) + std::abs(shifted(0.0));
      CHECK(std::abs(sym - fd) <= 2e-6 * scale);
      ++checked;
    }
  }
  CHECK(checked == 1200);
}

TEST_CASE("property: partial is linear") {
  auto chart = xyz();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> coord(-0.9, 0.9);
  for (int i = 0; i < 200; ++i) {
    auto e1 = random_expr(rng, chart, 3);
    auto e2 = random_expr(rng, chart, 3);
    auto a = ScalarExpr::constant(3, chart);
    auto b = ScalarExpr::constant(-2, chart);
    auto combo = (a * e1 + b * e2).partial("y");
    auto parts = a * e1.partial("y") + b * e2.partial("y");
    for (int k = 0; k < 5; ++k) {
      std::vector<double> p{coord(rng), coord(rng), coord(rng)};
      const double lhs = combo.eval(p);
      const double rhs = parts.eval(p);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(lhs)));
    }
  }
}
