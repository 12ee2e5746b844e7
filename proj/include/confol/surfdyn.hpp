#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "confol/planefields.hpp"

namespace confol {

// Parameter point where the pulled-back 1-form vanishes.
struct SingularPoint {
  double u = 0.0;
  double v = 0.0;
  double residual = 0.0;  // |(p,q)| there
};

// Connected component of singular grid nodes (4-adjacency, wrapping on
// periodic parameter axes).  A row that maps to a single chart point (a
// collapsed polar axis, say) is one cluster.
struct SingularCluster {
  std::vector<SingularPoint> nodes;
  SingularPoint representative;
};

enum class Termination { Boundary, Singularity, Closed, StepLimit };

struct Streamline {
  // (arc length, u, v) samples
  std::vector<std::array<double, 3>> samples;
  Termination reason = Termination::StepLimit;
};

struct CharFoliationOptions {
  int singular_grid_n = 41;
  double singular_tol = 1e-7;
  double step = 1e-3;
  long step_limit = 1000000;
  int record_every = 10;
  bool check_immersion = true;
};

struct CharFoliation {
  std::vector<SingularPoint> singular_nodes;
  std::vector<SingularCluster> clusters;
  std::vector<Streamline> streamlines;
  // pulled-back 1-form components (du and dv coefficients)
  ScalarExpr p, q;
};

// Induced singular foliation of a plane field on a parametrized surface:
// singular nodes of the pulled-back form on the parameter grid and RK4
// streamlines of its kernel line field from the given seeds.
CharFoliation characteristic_foliation(
    const PlaneFieldChart& pf, const SurfacePatch& surface,
    const std::vector<std::array<double, 2>>& seeds,
    const CharFoliationOptions& opts = {});

// Annulus (-eps,eps) x S^1 embedded in a 3-chart: the loop is {0} x S^1,
// the transversal is (-eps,eps) x {base}.  The parameter chart must have a
// symmetric first interval and a periodic second one.
struct TransverseAnnulus {
  ChartMap embedding;

  explicit TransverseAnnulus(ChartMap m);
  double eps() const { return embedding.source->interval(0).hi; }
  double period() const {
    return embedding.source->interval(1).hi - embedding.source->interval(1).lo;
  }
  double base() const { return embedding.source->interval(1).lo; }
};

struct HolonomyOptions {
  int seeds = 21;
  double seed_span = 0.8;        // fraction of eps covered by I'
  int steps_per_loop = 1000;
  int loops = 1;
  bool verify_foliation = true;  // classify the field first
  int verify_grid_n = 15;
  double tol = 1e-6;
};

struct FixedPoint {
  double x = 0.0;
  double derivative = 1.0;
};

struct ReturnMap {
  std::vector<std::pair<double, double>> samples;  // (x, phi(x)), sorted
  std::vector<FixedPoint> fixed_points;
  double derivative_at_zero = 1.0;

  // Linear interpolation of the sampled map; nullopt outside the range.
  std::optional<double> apply(double x) const;
};

// Lifts the loop through nearby leaves of the induced foliation on the
// annulus and records the landing points on the transversal.  Seeds whose
// leaves run off the annulus are dropped.
ReturnMap holonomy_return_map(const PlaneFieldChart& fol,
                              const TransverseAnnulus& annulus, int direction,
                              const HolonomyOptions& opts = {});

enum class SideBehavior { Trivial, Attracting, Repelling, Mixed, Empty };

struct HolonomyClass {
  double derivative_at_zero = 1.0;
  bool linear = false;  // |phi'(0) - 1| above the derivative margin
  SideBehavior positive_side = SideBehavior::Empty;
  SideBehavior negative_side = SideBehavior::Empty;
  bool sometimes_attracting = false;
  bool sometimes_repelling = false;
  double tol = 0.0;
  double derivative_margin = 0.0;

  bool trivial() const {
    return positive_side == SideBehavior::Trivial &&
           negative_side == SideBehavior::Trivial;
  }
  bool attracting() const {
    return positive_side == SideBehavior::Attracting &&
           negative_side == SideBehavior::Attracting;
  }
  bool repelling() const {
    return positive_side == SideBehavior::Repelling &&
           negative_side == SideBehavior::Repelling;
  }
  bool one_sided() const {
    return (positive_side == SideBehavior::Trivial) !=
           (negative_side == SideBehavior::Trivial);
  }
  std::string label() const;
};

struct HolonomyClassOptions {
  double tol = 1e-6;
  double derivative_margin = 1e-3;
  int min_samples_per_side = 10;
};

HolonomyClass classify_holonomy(const ReturnMap& rm,
                                const HolonomyClassOptions& opts = {});

}  // namespace confol
