#pragma once

#include <optional>

#include "confol/planefields.hpp"

namespace confol {

// Certificate for the product filling form on (3-chart) x [-1,1].  Valid
// when the form is numerically closed, its square clears the margin against
// the product volume, and both boundary restrictions dominate the kernel
// of alpha.
struct FillingCertificate {
  KForm omega;
  double d_omega_max = 0.0;
  double min_square_density = 0.0;
  double boundary_min_bottom = 0.0;  // omega | ker(alpha) x {-1}
  double boundary_min_top = 0.0;     // omega | ker(alpha) x {+1}
  double eps = 0.0;
  Margins margins;

  bool valid() const {
    return d_omega_max <= margins.zero_tol &&
           min_square_density >= margins.margin &&
           boundary_min_bottom >= margins.margin &&
           boundary_min_top >= margins.margin;
  }
};

struct SymplecticOptions {
  int grid_n = 15;
  Margins margins;
  int retries = 30;
};

// omega = i_v Omega + eps * d(t alpha) on the product chart.  Hypotheses
// checked up front: Omega is a positive volume form, v preserves it
// (d i_v Omega numerically zero) and alpha(v) clears the margin.  With
// eps unset the value is scanned downward from 1 until the certificate is
// valid.
FillingCertificate weak_filling_form(const KForm& alpha,
                                     const VectorFieldChart& v,
                                     const KForm& Omega,
                                     std::optional<double> eps,
                                     const SymplecticOptions& opts = {});

struct DilatingReport {
  bool dilating = false;
  double residual = 0.0;  // max-norm of d(i_v omega) - omega on the grid
};

// Checks L_v omega = omega for a closed 2-form.
DilatingReport check_dilating(const VectorFieldChart& v, const KForm& omega,
                              const SymplecticOptions& opts = {});

struct BoundaryFormReport {
  KForm alpha;  // pullback of i_v omega to the slice
  ClassificationReport classification;
  double identity_residual = 0.0;  // (i_v w)^w vs (1/2) i_v(w^w), sampled
};

// Induced 1-form i_v omega restricted to a 3-dimensional boundary slice,
// classified on the slice chart.  Also samples the defining identity
// (i_v omega) ^ omega = 1/2 i_v(omega ^ omega) at random points.
BoundaryFormReport induced_boundary_form(const VectorFieldChart& v,
                                         const KForm& omega,
                                         const ChartMap& slice,
                                         const SymplecticOptions& opts = {},
                                         int identity_samples = 100,
                                         unsigned seed = 0);

struct DominationReport {
  bool dominates = false;
  double minimum = 0.0;
};

// Evaluates omega on a deterministically chosen oriented basis of
// ker(alpha) at every grid point of the slice chart.
DominationReport weak_domination_check(const KForm& omega,
                                       const PlaneFieldChart& pf,
                                       const SymplecticOptions& opts = {});

// The oriented-basis construction used by the domination check, exposed
// for tests: drops the coordinate with the largest |alpha| coefficient,
// projects the remaining coordinate directions to ker(alpha),
// orthonormalizes, and orients against a positively paired vector.
std::pair<std::vector<double>, std::vector<double>> kernel_basis(
    const std::vector<double>& alpha_coeffs, double zero_tol = 1e-9);

}  // namespace confol
