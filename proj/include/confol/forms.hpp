#pragma once

#include <map>
#include <string>
#include <vector>

#include "confol/expr.hpp"

namespace confol {

// Differential form of degree 0..dim on a chart.  Coefficients are keyed
// by strictly increasing index tuples into the chart's variable list;
// coefficients that simplify to the constant 0 are dropped, so the zero
// form has an empty coefficient map.
class KForm {
 public:
  using Index = std::vector<int>;

  KForm() = default;  // empty placeholder; real forms name a chart
  KForm(ChartPtr chart, int degree);

  const ChartPtr& chart() const { return chart_; }
  int degree() const { return degree_; }
  const std::map<Index, ScalarExpr>& coefficients() const { return coeffs_; }
  bool is_structurally_zero() const { return coeffs_.empty(); }

  // Adds c * dx_{i1}^...^dx_{ik}; indices need not be sorted, repeated
  // indices contribute nothing.
  void add_term(Index indices, const ScalarExpr& c);
  ScalarExpr coefficient(const Index& sorted_indices) const;

  KForm operator+(const KForm& other) const;
  KForm operator-(const KForm& other) const;
  KForm operator-() const;
  KForm scaled(const ScalarExpr& f) const;

  // Value on k tangent vectors at a point.
  double apply(std::span<const double> point,
               const std::vector<std::vector<double>>& vectors) const;

  std::string str() const;

 private:
  ChartPtr chart_;
  int degree_ = 0;
  std::map<Index, ScalarExpr> coeffs_;
};

struct VectorFieldChart {
  ChartPtr chart;
  std::vector<ScalarExpr> components;

  VectorFieldChart(ChartPtr c, std::vector<ScalarExpr> comps);
  std::vector<double> eval(std::span<const double> p) const;
};

// Smooth map between charts, given by one target-variable expression per
// component in the source variables.  Used for pullbacks: surface patches,
// boundary slices and chart projections.
struct ChartMap {
  ChartPtr source;
  ChartPtr target;
  std::vector<ScalarExpr> components;

  ChartMap(ChartPtr src, ChartPtr tgt, std::vector<ScalarExpr> comps);
  std::vector<double> eval(std::span<const double> p) const;
};

// Parametrized surface: a ChartMap from a 2-dimensional parameter chart.
struct SurfacePatch {
  ChartMap map;
  bool orientation = true;

  SurfacePatch(ChartMap m, bool orient = true);
  // Rank-2 Jacobian check at grid samples; throws PreconditionError at the
  // first failure.
  void check_immersion(int grid_n = 11, double tol = 1e-9) const;
};

KForm exterior_d(const KForm& f);
KForm wedge(const KForm& a, const KForm& b);
KForm interior_product(const VectorFieldChart& v, const KForm& f);
KForm pullback(const ChartMap& m, const KForm& f);
KForm pullback(const SurfacePatch& s, const KForm& f);
// Cartan formula d(i_v f) + i_v(d f), with the degenerate degrees handled.
KForm lie_derivative(const VectorFieldChart& v, const KForm& f);

// Transports a form (or vector field) on `base` to the product chart built
// by product_with_interval(base, ...) by pulling back along the projection.
KForm lift_to_product(const KForm& f, const ChartPtr& product);
VectorFieldChart lift_to_product(const VectorFieldChart& v,
                                 const ChartPtr& product);
// Inclusion slice {tvar = value} of a product chart, as a ChartMap from
// the base chart into the product chart.
ChartMap interval_slice(const ChartPtr& base, const ChartPtr& product,
                        double value);

// Max of |coefficient| over a grid, across all coefficients.
double max_norm_on_grid(const KForm& f, const Grid& grid);

// Form literal syntax: sum of terms "coef * dX ^ dY" with coef an
// expression, e.g. "dz - y*dx" or "cos(r)*dz + r*sin(r)*dtheta".
KForm parse_form_literal(const std::string& text, const ChartPtr& chart);

}  // namespace confol
