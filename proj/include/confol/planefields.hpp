#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "confol/forms.hpp"

namespace confol {

// Plane field given as the kernel of a nowhere-zero 1-form on a chart.
struct PlaneFieldChart {
  KForm form;
  std::string label;

  PlaneFieldChart(KForm f, std::string lbl = "");
  const ChartPtr& chart() const { return form.chart(); }
};

enum class Verdict {
  PositiveContact,
  NegativeContact,
  Foliation,
  PositiveConfoliation,
  NegativeConfoliation,
  Mixed,
};

std::string verdict_name(Verdict v);

// Tolerances used by all sign verdicts.  "zero" means |density| <= zero_tol
// at every sample; "positive" means density >= margin at every sample.
struct Margins {
  double margin = 1e-6;
  double zero_tol = 1e-9;
};

struct ClassificationReport {
  Verdict verdict = Verdict::Mixed;
  KForm density;  // the 3-form form ^ d(form)
  double min_density = 0.0;
  double max_density = 0.0;
  Margins margins;
  int grid_n = 0;
  std::size_t samples = 0;
};

// Computes form ^ d(form) on a grid and classifies the sign pattern.
// Throws PreconditionError if the 1-form vanishes at a sample point.
ClassificationReport classify(const PlaneFieldChart& pf, int grid_n = 21,
                              Margins margins = {});

// Same, but only over the sample points selected by the predicate.
ClassificationReport classify_region(
    const PlaneFieldChart& pf, int grid_n,
    const std::function<bool(std::span<const double>)>& region,
    Margins margins = {});

// ker(dz - a dx) on the chart of a; the chart must have variables x and z.
PlaneFieldChart normal_form(const ScalarExpr& a);

// Grid points where the density clears the margin.
std::vector<std::vector<double>> contact_region(const PlaneFieldChart& pf,
                                                int grid_n,
                                                Margins margins = {});

// Euler-class bound check: |pairing| <= 2*genus - 2 for genus >= 1, and
// pairing == 0 for spheres.
bool adjunction_check(long pairing, long genus);

// Named catalog of plane fields.
//   xi1, xi2, xi3     the three constant-coefficient fields on [-1,1]^3
//   lutz              cos(r) dz + r sin(r) dtheta, params: rmin, rmax
//   reeb              kernel of the level-set form of g(x^2+y^2) e^z,
//                     params: variant (0: g(u) = 1-u, 1: smooth bump)
//   t3                dz + |t| * (twist 1-form), handedness following the
//                     sign of t; params: t, n (twist frequency)
//   s3                the round-sphere form pulled back to sphere
//                     coordinates (phi, theta1, theta2)
PlaneFieldChart example(const std::string& name,
                        const std::map<std::string, double>& params = {});

std::vector<std::string> example_names();

}  // namespace confol
