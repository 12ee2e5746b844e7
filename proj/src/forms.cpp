#include "confol/forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace confol {

namespace {

// Sorts an index tuple, returning the permutation sign, or 0 on a repeat.
int normalize_indices(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    std::size_t j = i;
    while (j > 0 && idx[j - 1] > idx[j]) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
      --j;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

void require_chart(const ChartPtr& a, const ChartPtr& b, const char* what) {
  if (!a->same_as(*b)) throw Error(std::string("chart mismatch in ") + what);
}

double det(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1.0;
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  double d = 0.0;
  std::vector<std::vector<double>> minor(n - 1, std::vector<double>(n - 1));
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t col = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        minor[i - 1][col++] = m[i][j];
      }
    }
    d += (c % 2 == 0 ? 1.0 : -1.0) * m[0][c] * det(minor);
  }
  return d;
}

}  // namespace

KForm::KForm(ChartPtr chart, int degree)
    : chart_(std::move(chart)), degree_(degree) {
  if (degree_ < 0 || degree_ > chart_->dim())
    throw Error("form degree out of range for chart " + chart_->name());
}

void KForm::add_term(Index indices, const ScalarExpr& c) {
  if (static_cast<int>(indices.size()) != degree_)
    throw Error("index tuple size does not match form degree");
  for (int i : indices)
    if (i < 0 || i >= chart_->dim()) throw Error("basis index out of range");
  const int sign = normalize_indices(indices);
  if (sign == 0 || c.is_constant_zero()) return;
  ScalarExpr add = sign > 0 ? c : -c;
  auto it = coeffs_.find(indices);
  if (it == coeffs_.end()) {
    coeffs_.emplace(std::move(indices), add);
  } else {
    it->second = it->second + add;
    if (it->second.is_constant_zero()) coeffs_.erase(it);
  }
}

ScalarExpr KForm::coefficient(const Index& sorted_indices) const {
  auto it = coeffs_.find(sorted_indices);
  if (it != coeffs_.end()) return it->second;
  return ScalarExpr::constant(0, chart_);
}

KForm KForm::operator+(const KForm& other) const {
  require_chart(chart_, other.chart_, "form addition");
  if (degree_ != other.degree_) throw Error("adding forms of unequal degree");
  KForm out = *this;
  for (const auto& [idx, c] : other.coeffs_) out.add_term(idx, c);
  return out;
}

KForm KForm::operator-(const KForm& other) const { return *this + (-other); }

KForm KForm::operator-() const {
  KForm out(chart_, degree_);
  for (const auto& [idx, c] : coeffs_) out.add_term(idx, -c);
  return out;
}

KForm KForm::scaled(const ScalarExpr& f) const {
  KForm out(chart_, degree_);
  for (const auto& [idx, c] : coeffs_) out.add_term(idx, f * c);
  return out;
}

double KForm::apply(std::span<const double> point,
                    const std::vector<std::vector<double>>& vectors) const {
  if (static_cast<int>(vectors.size()) != degree_)
    throw Error("form applied to wrong number of vectors");
  double total = 0.0;
  std::vector<std::vector<double>> minor(degree_,
                                         std::vector<double>(degree_));
  std::vector<double> p(point.begin(), point.end());
  chart_->wrap(p);
  for (const auto& [idx, c] : coeffs_) {
    for (int r = 0; r < degree_; ++r)
      for (int q = 0; q < degree_; ++q) minor[r][q] = vectors[r][idx[q]];
    total += c.eval_unchecked(p) * det(minor);
  }
  return total;
}

std::string KForm::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [idx, c] : coeffs_) {
    if (!first) os << " + ";
    first = false;
    if (degree_ == 0) {
      os << c.str();
      continue;
    }
    const bool one = c.is_constant_one();
    if (!one) os << "(" << c.str() << ") * ";
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) os << "^";
      os << "d" << chart_->variable(idx[i]);
    }
  }
  return os.str();
}

VectorFieldChart::VectorFieldChart(ChartPtr c, std::vector<ScalarExpr> comps)
    : chart(std::move(c)), components(std::move(comps)) {
  if (static_cast<int>(components.size()) != chart->dim())
    throw Error("vector field component count mismatch");
  for (const auto& comp : components)
    require_chart(comp.chart(), chart, "vector field");
}

std::vector<double> VectorFieldChart::eval(std::span<const double> p) const {
  std::vector<double> out(components.size());
  std::vector<double> q(p.begin(), p.end());
  chart->wrap(q);
  for (std::size_t i = 0; i < components.size(); ++i)
    out[i] = components[i].eval_unchecked(q);
  return out;
}

ChartMap::ChartMap(ChartPtr src, ChartPtr tgt, std::vector<ScalarExpr> comps)
    : source(std::move(src)), target(std::move(tgt)),
      components(std::move(comps)) {
  if (static_cast<int>(components.size()) != target->dim())
    throw Error("chart map component count mismatch");
  for (const auto& c : components)
    require_chart(c.chart(), source, "chart map");
}

std::vector<double> ChartMap::eval(std::span<const double> p) const {
  std::vector<double> out(components.size());
  std::vector<double> q(p.begin(), p.end());
  source->wrap(q);
  for (std::size_t i = 0; i < components.size(); ++i)
    out[i] = components[i].eval_unchecked(q);
  return out;
}

SurfacePatch::SurfacePatch(ChartMap m, bool orient)
    : map(std::move(m)), orientation(orient) {
  if (map.source->dim() != 2)
    throw Error("surface patch needs a 2-dimensional parameter chart");
}

void SurfacePatch::check_immersion(int grid_n, double tol) const {
  const int td = map.target->dim();
  std::vector<std::vector<ScalarExpr>> jac(td);
  for (int i = 0; i < td; ++i)
    for (int u = 0; u < 2; ++u)
      jac[i].push_back(map.components[i].partial(map.source->variable(u)));
  Grid grid(map.source, grid_n);
  grid.for_each([&](std::span<const double> p) {
    double best = 0.0;
    for (int i = 0; i < td; ++i) {
      for (int j = i + 1; j < td; ++j) {
        const double m = jac[i][0].eval_unchecked(p) * jac[j][1].eval_unchecked(p) -
                         jac[i][1].eval_unchecked(p) * jac[j][0].eval_unchecked(p);
        best = std::max(best, std::abs(m));
      }
    }
    if (best <= tol)
      throw PreconditionError("surface patch fails the immersion check at (" +
                              std::to_string(p[0]) + ", " +
                              std::to_string(p[1]) + ")");
  });
}

KForm exterior_d(const KForm& f) {
  const auto& chart = f.chart();
  if (f.degree() >= chart->dim())
    throw PreconditionError("exterior derivative of a top-degree form");
  KForm out(chart, f.degree() + 1);
  for (const auto& [idx, c] : f.coefficients()) {
    for (int j = 0; j < chart->dim(); ++j) {
      ScalarExpr dc = c.partial(chart->variable(j));
      if (dc.is_constant_zero()) continue;
      KForm::Index nidx;
      nidx.push_back(j);
      nidx.insert(nidx.end(), idx.begin(), idx.end());
      out.add_term(std::move(nidx), dc);
    }
  }
  return out;
}

KForm wedge(const KForm& a, const KForm& b) {
  require_chart(a.chart(), b.chart(), "wedge");
  if (a.degree() + b.degree() > a.chart()->dim())
    throw PreconditionError("wedge degree exceeds chart dimension");
  KForm out(a.chart(), a.degree() + b.degree());
  for (const auto& [ia, ca] : a.coefficients()) {
    for (const auto& [ib, cb] : b.coefficients()) {
      KForm::Index idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add_term(std::move(idx), ca * cb);
    }
  }
  return out;
}

KForm interior_product(const VectorFieldChart& v, const KForm& f) {
  require_chart(v.chart, f.chart(), "interior product");
  if (f.degree() < 1)
    throw PreconditionError("interior product of a 0-form");
  KForm out(f.chart(), f.degree() - 1);
  for (const auto& [idx, c] : f.coefficients()) {
    for (std::size_t m = 0; m < idx.size(); ++m) {
      const ScalarExpr& vm = v.components[idx[m]];
      if (vm.is_constant_zero()) continue;
      KForm::Index rest;
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (j != m) rest.push_back(idx[j]);
      ScalarExpr coef = vm * c;
      out.add_term(std::move(rest), (m % 2 == 0) ? coef : -coef);
    }
  }
  return out;
}

KForm pullback(const ChartMap& m, const KForm& f) {
  require_chart(m.target, f.chart(), "pullback");
  const auto& src = m.source;

  std::map<int, ScalarExpr> subs;
  for (int i = 0; i < m.target->dim(); ++i) subs.emplace(i, m.components[i]);

  // pullback of each target coordinate differential
  std::vector<KForm> dcomp;
  dcomp.reserve(m.target->dim());
  for (int i = 0; i < m.target->dim(); ++i) {
    KForm one(src, 1);
    for (int u = 0; u < src->dim(); ++u) {
      ScalarExpr d = m.components[i].partial(src->variable(u));
      if (!d.is_constant_zero()) one.add_term({u}, d);
    }
    dcomp.push_back(std::move(one));
  }

  if (f.degree() == 0) {
    KForm out(src, 0);
    for (const auto& [idx, c] : f.coefficients())
      out.add_term({}, c.substitute(subs, src));
    return out;
  }
  if (f.degree() > src->dim()) return KForm(src, src->dim());

  KForm out(src, f.degree());
  for (const auto& [idx, c] : f.coefficients()) {
    KForm term = dcomp[idx[0]];
    for (std::size_t j = 1; j < idx.size(); ++j)
      term = wedge(term, dcomp[idx[j]]);
    out = out + term.scaled(c.substitute(subs, src));
  }
  return out;
}

KForm pullback(const SurfacePatch& s, const KForm& f) {
  return pullback(s.map, f);
}

KForm lie_derivative(const VectorFieldChart& v, const KForm& f) {
  require_chart(v.chart, f.chart(), "lie derivative");
  const int dim = f.chart()->dim();
  if (f.degree() == 0) return interior_product(v, exterior_d(f));
  if (f.degree() == dim) return exterior_d(interior_product(v, f));
  return exterior_d(interior_product(v, f)) +
         interior_product(v, exterior_d(f));
}

namespace {

ChartMap projection_to_base(const ChartPtr& base, const ChartPtr& product) {
  std::vector<ScalarExpr> comps;
  for (int i = 0; i < base->dim(); ++i)
    comps.push_back(ScalarExpr::var(base->variable(i), product));
  return ChartMap(product, base, std::move(comps));
}

}  // namespace

KForm lift_to_product(const KForm& f, const ChartPtr& product) {
  return pullback(projection_to_base(f.chart(), product), f);
}

VectorFieldChart lift_to_product(const VectorFieldChart& v,
                                 const ChartPtr& product) {
  std::vector<ScalarExpr> comps(product->dim(),
                                ScalarExpr::constant(0, product));
  for (int i = 0; i < v.chart->dim(); ++i) {
    auto idx = product->index_of(v.chart->variable(i));
    if (!idx) throw Error("lift: product chart misses a base variable");
    comps[*idx] = v.components[i].rechart(product);
  }
  return VectorFieldChart(product, std::move(comps));
}

ChartMap interval_slice(const ChartPtr& base, const ChartPtr& product,
                        double value) {
  // the interval coordinate of a product chart sits in front
  std::vector<ScalarExpr> comps;
  comps.push_back(ScalarExpr::constant_real(value, base));
  for (int i = 0; i < base->dim(); ++i)
    comps.push_back(ScalarExpr::var(base->variable(i), base));
  return ChartMap(base, product, std::move(comps));
}

double max_norm_on_grid(const KForm& f, const Grid& grid) {
  double worst = 0.0;
  grid.for_each([&](std::span<const double> p) {
    for (const auto& [idx, c] : f.coefficients())
      worst = std::max(worst, std::abs(c.eval_unchecked(p)));
  });
  return worst;
}

// ---------------------------------------------------------------------
// Form literals

namespace {

// Splits "a + b - c" at top parenthesis level, keeping signs.
std::vector<std::pair<int, std::string>> split_terms(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  int depth = 0, sign = 1;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == '+' || c == '-') && !cur.empty() &&
        cur.find_first_not_of(" \t") != std::string::npos) {
      out.emplace_back(sign, cur);
      cur.clear();
      sign = c == '-' ? -1 : 1;
      continue;
    }
    if (depth == 0 && (c == '+' || c == '-') &&
        cur.find_first_not_of(" \t") == std::string::npos) {
      // leading sign of the first term
      sign = (c == '-') ? -sign : sign;
      continue;
    }
    cur += c;
  }
  if (cur.find_first_not_of(" \t") != std::string::npos)
    out.emplace_back(sign, cur);
  return out;
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t");
  auto b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

KForm parse_form_literal(const std::string& text, const ChartPtr& chart) {
  const auto terms = split_terms(text);
  if (terms.empty()) throw ParseError("empty form literal", 0);

  int degree = -1;
  std::vector<std::pair<ScalarExpr, KForm::Index>> parsed;
  for (const auto& [sign, raw] : terms) {
    std::string body = trim(raw);
    // trailing monomial: factors of the shape d<var> joined by ^ or *
    KForm::Index idx;
    std::string coef_text = body;
    for (;;) {
      std::string t = trim(coef_text);
      if (t.size() < 2) break;
      // find the trailing identifier
      std::size_t e = t.size();
      std::size_t s = e;
      while (s > 0 && (std::isalnum(static_cast<unsigned char>(t[s - 1])) ||
                       t[s - 1] == '_'))
        --s;
      const std::string word = t.substr(s, e - s);
      if (word.size() < 2 || word[0] != 'd') break;
      auto vi = chart->index_of(word.substr(1));
      if (!vi) break;
      // strip the monomial factor and a joining '^' or '*'
      std::string rest = trim(t.substr(0, s));
      if (!rest.empty() && (rest.back() == '^' || rest.back() == '*'))
        rest.pop_back();
      else if (!rest.empty()) {
        break;  // identifier glued to something else; let the parser complain
      }
      idx.insert(idx.begin(), *vi);
      coef_text = rest;
    }
    const std::string coef = trim(coef_text);
    ScalarExpr c = coef.empty() ? ScalarExpr::constant(1, chart)
                                : parse_expr(coef, chart);
    if (sign < 0) c = -c;
    if (degree < 0)
      degree = static_cast<int>(idx.size());
    else if (degree != static_cast<int>(idx.size()))
      throw ParseError("mixed-degree form literal: '" + body + "'", 0);
    parsed.emplace_back(std::move(c), std::move(idx));
  }

  KForm out(chart, degree);
  for (auto& [c, idx] : parsed) out.add_term(idx, c);
  return out;
}

}  // namespace confol
