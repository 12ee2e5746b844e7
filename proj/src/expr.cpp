#include "confol/expr.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace confol {

// ---------------------------------------------------------------------
// Rational

namespace {

bool mul_ok(std::int64_t a, std::int64_t b, std::int64_t* out) {
  return !__builtin_mul_overflow(a, b, out);
}
bool add_ok(std::int64_t a, std::int64_t b, std::int64_t* out) {
  return !__builtin_add_overflow(a, b, out);
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw Error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::optional<Rational> Rational::add(Rational a, Rational b) {
  std::int64_t x, y, d;
  if (!mul_ok(a.num, b.den, &x) || !mul_ok(b.num, a.den, &y) ||
      !add_ok(x, y, &x) || !mul_ok(a.den, b.den, &d))
    return std::nullopt;
  return Rational(x, d);
}

std::optional<Rational> Rational::sub(Rational a, Rational b) {
  return add(a, Rational(-b.num, b.den));
}

std::optional<Rational> Rational::mul(Rational a, Rational b) {
  std::int64_t n, d;
  if (!mul_ok(a.num, b.num, &n) || !mul_ok(a.den, b.den, &d))
    return std::nullopt;
  return Rational(n, d);
}

std::optional<Rational> Rational::div(Rational a, Rational b) {
  if (b.num == 0) return std::nullopt;
  return mul(a, Rational(b.den, b.num));
}

std::optional<Rational> Rational::pow(Rational a, int n) {
  Rational r(1);
  Rational base = n < 0 ? Rational(a.den, a.num == 0 ? 1 : a.num) : a;
  if (n < 0 && a.num == 0) return std::nullopt;
  int k = n < 0 ? -n : n;
  while (k-- > 0) {
    auto m = mul(r, base);
    if (!m) return std::nullopt;
    r = *m;
  }
  return r;
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

// ---------------------------------------------------------------------
// Nodes

enum class Kind {
  Number,
  Pi,
  E,
  Var,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Pow,
  Sin,
  Cos,
  Exp,
  Sqrt,
  Pos,
  Step,
};

struct ScalarExpr::Node {
  Kind kind;
  Rational value;          // Number
  std::string name;        // Var
  int index = -1;          // Var: position in the owning chart
  int exponent = 0;        // Pow
  NodePtr a, b;

  explicit Node(Kind k) : kind(k) {}
};

namespace {

using Node = ScalarExpr::Node;
using NodePtr = ScalarExpr::NodePtr;

NodePtr number(Rational r) {
  auto n = std::make_shared<Node>(Kind::Number);
  n->value = r;
  return n;
}

bool is_number(const NodePtr& n) { return n->kind == Kind::Number; }
bool is_zero(const NodePtr& n) {
  return n->kind == Kind::Number && n->value.is_zero();
}
bool is_one(const NodePtr& n) {
  return n->kind == Kind::Number && n->value.is_one();
}

NodePtr unary(Kind k, NodePtr a) {
  auto n = std::make_shared<Node>(k);
  n->a = std::move(a);
  return n;
}

NodePtr binary(Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>(k);
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr neg_node(NodePtr a);

NodePtr add_node(NodePtr a, NodePtr b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  if (is_number(a) && is_number(b))
    if (auto r = Rational::add(a->value, b->value)) return number(*r);
  return binary(Kind::Add, std::move(a), std::move(b));
}

NodePtr sub_node(NodePtr a, NodePtr b) {
  if (is_zero(b)) return a;
  if (is_zero(a)) return neg_node(std::move(b));
  if (is_number(a) && is_number(b))
    if (auto r = Rational::sub(a->value, b->value)) return number(*r);
  return binary(Kind::Sub, std::move(a), std::move(b));
}

NodePtr neg_node(NodePtr a) {
  if (is_number(a)) return number(Rational(-a->value.num, a->value.den));
  if (a->kind == Kind::Neg) return a->a;
  return unary(Kind::Neg, std::move(a));
}

NodePtr mul_node(NodePtr a, NodePtr b) {
  if (is_zero(a) || is_zero(b)) return number(Rational(0));
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  if (is_number(a) && is_number(b))
    if (auto r = Rational::mul(a->value, b->value)) return number(*r);
  return binary(Kind::Mul, std::move(a), std::move(b));
}

NodePtr div_node(NodePtr a, NodePtr b) {
  if (is_zero(a)) return a;
  if (is_one(b)) return a;
  if (is_number(a) && is_number(b) && !b->value.is_zero())
    if (auto r = Rational::div(a->value, b->value)) return number(*r);
  return binary(Kind::Div, std::move(a), std::move(b));
}

NodePtr pow_node(NodePtr base, int exponent) {
  if (exponent == 0) return number(Rational(1));
  if (exponent == 1) return base;
  if (is_number(base) && std::abs(exponent) <= 16)
    if (auto r = Rational::pow(base->value, exponent)) return number(*r);
  auto n = std::make_shared<Node>(Kind::Pow);
  n->a = std::move(base);
  n->exponent = exponent;
  return n;
}

bool trees_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Number:
      return a->value == b->value;
    case Kind::Pi:
    case Kind::E:
      return true;
    case Kind::Var:
      return a->name == b->name;
    case Kind::Pow:
      return a->exponent == b->exponent && trees_equal(a->a, b->a);
    default:
      return trees_equal(a->a, b->a) && trees_equal(a->b, b->b);
  }
}

double powi(double x, int n) {
  if (n < 0) {
    if (x == 0.0) throw DomainError("zero raised to a negative power");
    return 1.0 / powi(x, -n);
  }
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

double eval_node(const Node* n, const double* p) {
  switch (n->kind) {
    case Kind::Number:
      return n->value.value();
    case Kind::Pi:
      return M_PI;
    case Kind::E:
      return M_E;
    case Kind::Var:
      return p[n->index];
    case Kind::Add:
      return eval_node(n->a.get(), p) + eval_node(n->b.get(), p);
    case Kind::Sub:
      return eval_node(n->a.get(), p) - eval_node(n->b.get(), p);
    case Kind::Mul:
      return eval_node(n->a.get(), p) * eval_node(n->b.get(), p);
    case Kind::Div: {
      const double d = eval_node(n->b.get(), p);
      if (d == 0.0) throw DomainError("division by zero");
      return eval_node(n->a.get(), p) / d;
    }
    case Kind::Neg:
      return -eval_node(n->a.get(), p);
    case Kind::Pow:
      return powi(eval_node(n->a.get(), p), n->exponent);
    case Kind::Sin:
      return std::sin(eval_node(n->a.get(), p));
    case Kind::Cos:
      return std::cos(eval_node(n->a.get(), p));
    case Kind::Exp:
      return std::exp(eval_node(n->a.get(), p));
    case Kind::Sqrt: {
      const double v = eval_node(n->a.get(), p);
      if (v < 0.0) throw DomainError("sqrt of a negative value");
      return std::sqrt(v);
    }
    case Kind::Pos: {
      const double v = eval_node(n->a.get(), p);
      return v > 0.0 ? v : 0.0;
    }
    case Kind::Step:
      return eval_node(n->a.get(), p) > 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

}  // namespace

// ---------------------------------------------------------------------
// ScalarExpr

ScalarExpr::ScalarExpr(NodePtr node, ChartPtr chart)
    : node_(std::move(node)), chart_(std::move(chart)) {}

ScalarExpr ScalarExpr::constant(Rational r, ChartPtr chart) {
  return ScalarExpr(number(r), std::move(chart));
}

ScalarExpr ScalarExpr::constant_real(double v, ChartPtr chart) {
  if (!std::isfinite(v)) throw Error("non-finite constant");
  int exp2 = 0;
  const double mant = std::frexp(v, &exp2);
  const double scaled = std::ldexp(mant, 53);
  const std::int64_t m = static_cast<std::int64_t>(scaled);
  const int shift = exp2 - 53;
  if (static_cast<double>(m) == scaled && shift <= 0 && shift > -62) {
    return constant(Rational(m, std::int64_t{1} << -shift), std::move(chart));
  }
  if (static_cast<double>(m) == scaled && shift >= 0 && shift < 10 &&
      std::abs(v) < 9e17) {
    return constant(Rational(m << shift, 1), std::move(chart));
  }
  const double den = 1e15;
  return constant(Rational(static_cast<std::int64_t>(std::llround(v * den)),
                           static_cast<std::int64_t>(den)),
                  std::move(chart));
}

ScalarExpr ScalarExpr::pi(ChartPtr chart) {
  return ScalarExpr(std::make_shared<Node>(Kind::Pi), std::move(chart));
}

ScalarExpr ScalarExpr::euler(ChartPtr chart) {
  return ScalarExpr(std::make_shared<Node>(Kind::E), std::move(chart));
}

ScalarExpr ScalarExpr::var(const std::string& name, ChartPtr chart) {
  auto idx = chart->index_of(name);
  if (!idx)
    throw Error("variable " + name + " does not belong to chart " +
                chart->name());
  auto n = std::make_shared<Node>(Kind::Var);
  n->name = name;
  n->index = *idx;
  return ScalarExpr(std::move(n), std::move(chart));
}

namespace {
void require_same_chart(const ScalarExpr& a, const ScalarExpr& b) {
  if (!a.chart() || !b.chart() || !a.chart()->same_as(*b.chart()))
    throw Error("expressions on different charts");
}
}  // namespace

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  require_same_chart(a, b);
  return ScalarExpr(add_node(a.node(), b.node()), a.chart());
}
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  require_same_chart(a, b);
  return ScalarExpr(sub_node(a.node(), b.node()), a.chart());
}
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  require_same_chart(a, b);
  return ScalarExpr(mul_node(a.node(), b.node()), a.chart());
}
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  require_same_chart(a, b);
  return ScalarExpr(div_node(a.node(), b.node()), a.chart());
}
ScalarExpr operator-(const ScalarExpr& a) {
  return ScalarExpr(neg_node(a.node()), a.chart());
}
ScalarExpr ScalarExpr::pow(const ScalarExpr& base, int exponent) {
  return ScalarExpr(pow_node(base.node(), exponent), base.chart());
}
ScalarExpr ScalarExpr::sin(const ScalarExpr& a) {
  return ScalarExpr(unary(Kind::Sin, a.node()), a.chart());
}
ScalarExpr ScalarExpr::cos(const ScalarExpr& a) {
  return ScalarExpr(unary(Kind::Cos, a.node()), a.chart());
}
ScalarExpr ScalarExpr::exp(const ScalarExpr& a) {
  return ScalarExpr(unary(Kind::Exp, a.node()), a.chart());
}
ScalarExpr ScalarExpr::sqrt(const ScalarExpr& a) {
  return ScalarExpr(unary(Kind::Sqrt, a.node()), a.chart());
}
ScalarExpr ScalarExpr::pos(const ScalarExpr& a) {
  return ScalarExpr(unary(Kind::Pos, a.node()), a.chart());
}
ScalarExpr ScalarExpr::step(const ScalarExpr& a) {
  return ScalarExpr(unary(Kind::Step, a.node()), a.chart());
}

double ScalarExpr::eval(std::span<const double> point) const {
  if (!node_) throw Error("evaluating empty expression");
  std::vector<double> p(point.begin(), point.end());
  chart_->wrap(p);
  chart_->check_point(p);
  return eval_node(node_.get(), p.data());
}

double ScalarExpr::eval_unchecked(std::span<const double> point) const {
  return eval_node(node_.get(), point.data());
}

bool ScalarExpr::is_constant_zero() const { return node_ && is_zero(node_); }
bool ScalarExpr::is_constant_one() const { return node_ && is_one(node_); }

bool ScalarExpr::same_tree(const ScalarExpr& other) const {
  return trees_equal(node_, other.node_);
}

namespace {

bool node_depends(const Node* n, int index) {
  if (!n) return false;
  if (n->kind == Kind::Var) return n->index == index;
  return node_depends(n->a.get(), index) || node_depends(n->b.get(), index);
}

NodePtr diff(const NodePtr& n, int index) {
  switch (n->kind) {
    case Kind::Number:
    case Kind::Pi:
    case Kind::E:
      return number(Rational(0));
    case Kind::Var:
      return number(Rational(n->index == index ? 1 : 0));
    case Kind::Add:
      return add_node(diff(n->a, index), diff(n->b, index));
    case Kind::Sub:
      return sub_node(diff(n->a, index), diff(n->b, index));
    case Kind::Neg:
      return neg_node(diff(n->a, index));
    case Kind::Mul:
      return add_node(mul_node(diff(n->a, index), n->b),
                      mul_node(n->a, diff(n->b, index)));
    case Kind::Div:
      // (u/v)' = (u'v - uv') / v^2; poles are covered by the singular-locus
      // declarations of the owning chart.
      return div_node(sub_node(mul_node(diff(n->a, index), n->b),
                               mul_node(n->a, diff(n->b, index))),
                      pow_node(n->b, 2));
    case Kind::Pow:
      return mul_node(
          mul_node(number(Rational(n->exponent)), pow_node(n->a, n->exponent - 1)),
          diff(n->a, index));
    case Kind::Sin:
      return mul_node(unary(Kind::Cos, n->a), diff(n->a, index));
    case Kind::Cos:
      return neg_node(mul_node(unary(Kind::Sin, n->a), diff(n->a, index)));
    case Kind::Exp:
      return mul_node(unary(Kind::Exp, n->a), diff(n->a, index));
    case Kind::Sqrt:
      return div_node(diff(n->a, index),
                      mul_node(number(Rational(2)), unary(Kind::Sqrt, n->a)));
    case Kind::Pos:
      return mul_node(unary(Kind::Step, n->a), diff(n->a, index));
    case Kind::Step:
      // weak derivative away from the kink
      return number(Rational(0));
  }
  return number(Rational(0));
}

NodePtr rebuild(const NodePtr& n, const std::map<int, ScalarExpr>& subs,
                const ChartPtr& target) {
  switch (n->kind) {
    case Kind::Number:
    case Kind::Pi:
    case Kind::E:
      return n;
    case Kind::Var: {
      auto it = subs.find(n->index);
      if (it != subs.end()) return it->second.node();
      auto idx = target->index_of(n->name);
      if (!idx)
        throw Error("variable " + n->name + " does not belong to chart " +
                    target->name());
      auto v = std::make_shared<Node>(Kind::Var);
      v->name = n->name;
      v->index = *idx;
      return v;
    }
    case Kind::Pow:
      return pow_node(rebuild(n->a, subs, target), n->exponent);
    case Kind::Add:
      return add_node(rebuild(n->a, subs, target), rebuild(n->b, subs, target));
    case Kind::Sub:
      return sub_node(rebuild(n->a, subs, target), rebuild(n->b, subs, target));
    case Kind::Mul:
      return mul_node(rebuild(n->a, subs, target), rebuild(n->b, subs, target));
    case Kind::Div:
      return div_node(rebuild(n->a, subs, target), rebuild(n->b, subs, target));
    case Kind::Neg:
      return neg_node(rebuild(n->a, subs, target));
    default:
      return unary(n->kind, rebuild(n->a, subs, target));
  }
}

}  // namespace

ScalarExpr ScalarExpr::partial(const std::string& var) const {
  auto idx = chart_->index_of(var);
  if (!idx)
    throw Error("variable " + var + " does not belong to chart " +
                chart_->name());
  return ScalarExpr(diff(node_, *idx), chart_);
}

bool ScalarExpr::depends_on(const std::string& var) const {
  auto idx = chart_->index_of(var);
  if (!idx) return false;
  return node_depends(node_.get(), *idx);
}

ScalarExpr ScalarExpr::rechart(const ChartPtr& chart) const {
  return ScalarExpr(rebuild(node_, {}, chart), chart);
}

ScalarExpr ScalarExpr::substitute(const std::map<int, ScalarExpr>& by_index,
                                  const ChartPtr& source) const {
  return ScalarExpr(rebuild(node_, by_index, source), source);
}

// ---------------------------------------------------------------------
// Printing.  Output is re-parseable and round-trips to the same tree.

namespace {

//   1: + -   2: * /   3: unary -   4: ^   5: atoms and calls
int precedence(const Node* n) {
  switch (n->kind) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Neg:
      return 3;
    case Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

void print_node(const Node* n, std::ostream& os);

void print_child(const Node* c, std::ostream& os, int min_prec) {
  if (precedence(c) < min_prec) {
    os << '(';
    print_node(c, os);
    os << ')';
  } else {
    print_node(c, os);
  }
}

void print_call(const char* fn, const Node* a, std::ostream& os) {
  os << fn << '(';
  print_node(a, os);
  os << ')';
}

void print_node(const Node* n, std::ostream& os) {
  switch (n->kind) {
    case Kind::Number:
      if (n->value.num < 0 || n->value.den != 1)
        os << '(' << n->value.str() << ')';
      else
        os << n->value.str();
      break;
    case Kind::Pi:
      os << "pi";
      break;
    case Kind::E:
      os << "e";
      break;
    case Kind::Var:
      os << n->name;
      break;
    case Kind::Add:
      print_child(n->a.get(), os, 1);
      os << " + ";
      print_child(n->b.get(), os, 2);
      break;
    case Kind::Sub:
      print_child(n->a.get(), os, 1);
      os << " - ";
      print_child(n->b.get(), os, 2);
      break;
    case Kind::Mul:
      print_child(n->a.get(), os, 2);
      os << " * ";
      print_child(n->b.get(), os, 3);
      break;
    case Kind::Div:
      print_child(n->a.get(), os, 2);
      os << " / ";
      print_child(n->b.get(), os, 3);
      break;
    case Kind::Neg:
      os << '-';
      print_child(n->a.get(), os, 3);
      break;
    case Kind::Pow:
      print_child(n->a.get(), os, 5);
      os << '^' << n->exponent;
      break;
    case Kind::Sin:
      print_call("sin", n->a.get(), os);
      break;
    case Kind::Cos:
      print_call("cos", n->a.get(), os);
      break;
    case Kind::Exp:
      print_call("exp", n->a.get(), os);
      break;
    case Kind::Sqrt:
      print_call("sqrt", n->a.get(), os);
      break;
    case Kind::Pos:
      print_call("pos", n->a.get(), os);
      break;
    case Kind::Step:
      print_call("step", n->a.get(), os);
      break;
  }
}

}  // namespace

std::string ScalarExpr::str() const {
  if (!node_) return "0";
  std::ostringstream os;
  print_node(node_.get(), os);
  return os.str();
}

// ---------------------------------------------------------------------
// Parser

namespace {

struct Parser {
  const std::string& text;
  const ChartPtr& chart;
  std::size_t pos = 0;

  Parser(const std::string& t, const ChartPtr& c) : text(t), chart(c) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, pos);
  }

  ScalarExpr parse() {
    auto e = expr();
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input");
    return e;
  }

  ScalarExpr expr() {
    auto lhs = term();
    for (;;) {
      if (eat('+'))
        lhs = lhs + term();
      else if (eat('-'))
        lhs = lhs - term();
      else
        return lhs;
    }
  }

  ScalarExpr term() {
    auto lhs = factor();
    for (;;) {
      if (eat('*'))
        lhs = lhs * factor();
      else if (eat('/'))
        lhs = lhs / factor();
      else
        return lhs;
    }
  }

  ScalarExpr factor() {
    if (eat('-')) return -factor();
    auto b = base();
    if (eat('^')) return ScalarExpr::pow(b, integer());
    return b;
  }

  int integer() {
    skip_ws();
    std::size_t start = pos;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
      negative = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      fail("expected integer exponent");
    long v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      if (v > 1000000) {
        pos = start;
        fail("exponent too large");
      }
      ++pos;
    }
    return static_cast<int>(negative ? -v : v);
  }

  ScalarExpr base() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number_lit();
    if (c == '(') {
      ++pos;
      auto e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name_lit();
    fail(std::string("unexpected character '") + c + "'");
  }

  ScalarExpr number_lit() {
    std::size_t start = pos;
    std::int64_t int_part = 0, frac_num = 0, frac_den = 1;
    bool any = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (int_part > (std::int64_t{1} << 56)) { pos = start; fail("number literal too large"); }
      int_part = int_part * 10 + (text[pos] - '0');
      ++pos;
      any = true;
    }
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        if (frac_den > (std::int64_t{1} << 50)) { pos = start; fail("number literal too precise"); }
        frac_num = frac_num * 10 + (text[pos] - '0');
        frac_den *= 10;
        ++pos;
        any = true;
      }
    }
    if (!any) fail("malformed number");
    auto r = Rational::add(Rational(int_part), Rational(frac_num, frac_den));
    if (!r) fail("number literal out of range");
    return ScalarExpr::constant(*r, chart);
  }

  ScalarExpr name_lit() {
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    const std::string name = text.substr(start, pos - start);
    skip_ws();
    const bool call = pos < text.size() && text[pos] == '(';
    if (call) {
      ScalarExpr (*fn)(const ScalarExpr&) = nullptr;
      if (name == "sin") fn = &ScalarExpr::sin;
      else if (name == "cos") fn = &ScalarExpr::cos;
      else if (name == "exp") fn = &ScalarExpr::exp;
      else if (name == "sqrt") fn = &ScalarExpr::sqrt;
      else if (name == "pos") fn = &ScalarExpr::pos;
      else if (name == "step") fn = &ScalarExpr::step;
      if (fn) {
        ++pos;  // '('
        auto arg = expr();
        if (!eat(')')) fail("expected ')' after argument of " + name);
        return fn(arg);
      }
    }
    if (name == "pi") return ScalarExpr::pi(chart);
    if (name == "e") return ScalarExpr::euler(chart);
    if (chart->index_of(name)) return ScalarExpr::var(name, chart);
    pos = start;
    fail("unknown name '" + name + "' for chart " + chart->name());
  }
};

}  // namespace

ScalarExpr parse_expr(const std::string& text, const ChartPtr& chart) {
  Parser p(text, chart);
  return p.parse();
}

}  // namespace confol
