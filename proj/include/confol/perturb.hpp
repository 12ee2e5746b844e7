#pragma once

#include <optional>
#include <string>
#include <vector>

#include "confol/planefields.hpp"

namespace confol {

// A named 1-variable cutoff/bump function with numerically verified
// properties.  The factories below build the concrete shapes used by the
// perturbation operators; each verifies its own declared properties on a
// 1-D grid at construction and throws VerificationError on failure.
class Cutoff {
 public:
  Cutoff(std::string name, ScalarExpr expr);

  const std::string& name() const { return name_; }
  const ScalarExpr& expr() const { return expr_; }
  const ChartPtr& line() const { return expr_.chart(); }

  double operator()(double u) const;
  double derivative(double u) const;
  // Composition: the cutoff applied to an expression on another chart.
  ScalarExpr of(const ScalarExpr& arg) const;
  ScalarExpr derivative_of(const ScalarExpr& arg) const;

  // property checks (strict unless stated); all sample on `grid_n` points
  void require_value(double u, double expected, double tol = 1e-12) const;
  void require_min(double lo, double hi, double bound, int grid_n = 401) const;
  void require_max(double lo, double hi, double bound, int grid_n = 401) const;
  void require_derivative_min(double lo, double hi, double bound,
                              int grid_n = 401) const;
  void require_derivative_max(double lo, double hi, double bound,
                              int grid_n = 401) const;

 private:
  std::string name_;
  ScalarExpr expr_;
  ScalarExpr deriv_;
};

// Quintic smoothstep: 0 for u <= 0, 1 for u >= 1, C^2 monotone between.
Cutoff quintic_step();
// Plateau bump: identically 1 for w <= w0, identically 0 for w >= w1.
Cutoff plateau_bump(double w0, double w1);
// pos(1-u)^2: value 1 at 0, decreasing, exactly 0 for u >= 1.
Cutoff quadratic_decay();
// -depth * pos(z) * pos(1/2 - z): zero at 0 and 1/2 and on [1/2,1],
// negative on (0,1/2), slope -depth/2 from the right at 0.
Cutoff shear_profile(double depth = 1.0);
// pos(1 - (z/eps)^2)^3: positive on (-eps,eps), exactly 0 outside,
// vanishing to order 3 at the endpoints.
Cutoff symmetric_bump(double eps);

// Bundle of cutoffs consumed by tangent_arc_contactize.
struct CutoffSpec {
  std::optional<Cutoff> g;  // plateau bump in x^2 and z^2
  std::optional<Cutoff> h;  // radial decay
  std::optional<Cutoff> f;  // tangent-arc profile from build_f
  double delta = 0.25;      // width of the contact band below y = 1
};

// Profile for the tangent-arc deformation: positive, bounded by `bound`,
// strictly increasing on (0, 1-delta), derivative in (-m, 0] on (1-delta, 1).
Cutoff build_f(double m, double delta, double bound);

struct PerturbOptions {
  int grid_n = 21;
  Margins margins;
  int retries = 20;
};

struct PerturbResult {
  PlaneFieldChart field;
  double parameter = 0.0;  // the t / eps / c that succeeded
  ClassificationReport before;
  ClassificationReport after;  // on the claimed contact region
};

// Adds t * g(x^2) g(z^2) f(y) to the slope function of ker(dz - a dx) and
// scans t downward until the interior of the chart classifies as positive
// contact.  The chart of `a` must be [-1,1] x [0,1] x [-1,1] in (x,y,z).
PerturbResult tangent_arc_contactize(const ScalarExpr& a, double t,
                                     const CutoffSpec& cut,
                                     const PerturbOptions& opts = {});

// Adds eps * h(y^2+z^2) dy to dz - a(x,z) dx.  Requires -da/dz >= C > 0 and
// a(x,0) = 0; the result is positive contact on the solid torus
// {y^2+z^2 < 1 - rim} and coefficientwise identical to the input outside
// the unit disk.
struct HolonomyContactizeOptions {
  int grid_n = 21;
  Margins margins;
  double rim = 0.05;
};
PerturbResult holonomy_contactize(const ScalarExpr& a, const Cutoff& h,
                                  double eps,
                                  const HolonomyContactizeOptions& opts = {});

// ker(dz + g(y) h(z) dy) on the shear chart (x, y periodic, z periodic):
// an integrable plane field with one-sided holonomy along the y-loop.
PlaneFieldChart shear_foliation(const Cutoff& g, const Cutoff& h);
ChartPtr shear_chart();

// A family of functions sampled on a common z-grid.
struct SampledFamily {
  std::vector<double> zs;
  std::vector<std::vector<double>> members;
};

struct SampledDiffeo {
  std::vector<double> zs;
  std::vector<double> fs;
  double c = 0.0;          // bump amplitude that satisfied the inequality
  ScalarExpr f_expr;       // closed form z - c * sigma(z)
  ScalarExpr fprime_expr;
};

struct DiffeoOptions {
  double initial_c = -1.0;  // <= 0: derived from eps
  int retries = 30;
  double tol = 0.0;         // strictness slack for the inequality
};

// Monotone graph-shear diffeomorphism f(z) = z - c * sigma(z) with
// f'(z) v_x(z) > v_x(f(z)) at every interior sample for every member.
// With eps < 1 the bump is supported in (-eps, eps) and f is the identity
// outside; with eps = 1 it vanishes to third order at -1 and 1.
SampledDiffeo monotone_graph_diffeo(const SampledFamily& v, double eps,
                                    const DiffeoOptions& opts = {});

// Monotone interpolation between two y-independent slope functions with
// a1 <= a0 - margin pointwise; the transition band classifies as positive
// contact.
PerturbResult interpolate_plane_fields(const ScalarExpr& a0,
                                       const ScalarExpr& a1,
                                       const PerturbOptions& opts = {});

}  // namespace confol
