#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "confol/chart.hpp"

namespace confol {

// Exact rational constant.  Arithmetic that would overflow reports failure
// instead of folding, so expression simplification stays exact.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  double value() const { return static_cast<double>(num) / den; }
  bool is_zero() const { return num == 0; }
  bool is_one() const { return num == 1 && den == 1; }
  bool operator==(const Rational& o) const {
    return num == o.num && den == o.den;
  }

  static std::optional<Rational> add(Rational a, Rational b);
  static std::optional<Rational> sub(Rational a, Rational b);
  static std::optional<Rational> mul(Rational a, Rational b);
  static std::optional<Rational> div(Rational a, Rational b);
  static std::optional<Rational> pow(Rational a, int n);

  std::string str() const;
};

// Closed-form smooth function of the variables of one chart.  Trees are
// immutable values; building, differentiating and evaluating them is pure.
//
// Node kinds: rational constants, the named constants pi and e, chart
// variables, + - * / and unary minus, integer powers, and the unary
// functions sin, cos, exp, sqrt plus the piecewise primitives pos
// (pos(u) = max(u,0)) and step (its derivative, 1 for u > 0 else 0) used
// by the cutoff constructions.  Only local simplification is performed:
// identity/annihilator rules and exact constant folding.
class ScalarExpr {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  ScalarExpr() = default;
  ScalarExpr(NodePtr node, ChartPtr chart);

  bool empty() const { return node_ == nullptr; }
  const ChartPtr& chart() const { return chart_; }
  const NodePtr& node() const { return node_; }

  double eval(std::span<const double> point) const;
  // Evaluation without the domain/singular-locus checks; used by grid
  // drivers that have already validated their sample points.
  double eval_unchecked(std::span<const double> point) const;

  ScalarExpr partial(const std::string& var) const;
  bool depends_on(const std::string& var) const;

  // Rebuilds the tree on another chart; every variable must exist there.
  ScalarExpr rechart(const ChartPtr& chart) const;
  // Substitutes chart variables by expressions on a common source chart.
  ScalarExpr substitute(const std::map<int, ScalarExpr>& by_index,
                        const ChartPtr& source) const;

  std::string str() const;

  // Structural equality modulo nothing (trees are already normalized by
  // the building constructors).
  bool same_tree(const ScalarExpr& other) const;

  bool is_constant_zero() const;
  bool is_constant_one() const;

  // -- building blocks ------------------------------------------------
  static ScalarExpr constant(Rational r, ChartPtr chart);
  static ScalarExpr constant(std::int64_t n, ChartPtr chart) {
    return constant(Rational(n), std::move(chart));
  }
  // Exact dyadic rational when the double fits, else the closest rational
  // with denominator 10^15.
  static ScalarExpr constant_real(double v, ChartPtr chart);
  static ScalarExpr pi(ChartPtr chart);
  static ScalarExpr euler(ChartPtr chart);
  static ScalarExpr var(const std::string& name, ChartPtr chart);

  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a);
  static ScalarExpr pow(const ScalarExpr& base, int exponent);
  static ScalarExpr sin(const ScalarExpr& a);
  static ScalarExpr cos(const ScalarExpr& a);
  static ScalarExpr exp(const ScalarExpr& a);
  static ScalarExpr sqrt(const ScalarExpr& a);
  static ScalarExpr pos(const ScalarExpr& a);
  static ScalarExpr step(const ScalarExpr& a);

 private:
  NodePtr node_;
  ChartPtr chart_;
};

// Parses the expression grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' integer)?
//   base   := number | name | '(' expr ')' | func '(' expr ')'
//   func   := sin | cos | exp | sqrt | pos | step
// where names are chart variables or the constants pi, e.
ScalarExpr parse_expr(const std::string& text, const ChartPtr& chart);

inline ScalarExpr partial(const ScalarExpr& e, const std::string& var) {
  return e.partial(var);
}

}  // namespace confol
