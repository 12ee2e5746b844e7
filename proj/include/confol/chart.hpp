#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confol/error.hpp"

namespace confol {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

// A coordinate chart: named ordered variables, a rectangular domain and
// optional periodic flags.  The ordered variable list fixes the positive
// volume form.  Singular loci are hyperplanes {var = value} (e.g. r = 0 in
// cylindrical coordinates) on which evaluation is refused and from which
// sample grids stay away.
class Chart {
 public:
  Chart(std::string name, std::vector<std::string> variables,
        std::vector<Interval> domain, std::vector<bool> periodic = {});

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(vars_.size()); }
  const std::vector<std::string>& variables() const { return vars_; }
  const std::string& variable(int i) const { return vars_[i]; }
  const Interval& interval(int i) const { return domain_[i]; }
  bool periodic(int i) const { return periodic_[i]; }

  std::optional<int> index_of(const std::string& var) const;

  void add_singular_locus(const std::string& var, double value);
  const std::vector<std::pair<int, double>>& singular_loci() const {
    return loci_;
  }

  // Wraps periodic coordinates into [lo, hi) and checks the others against
  // the domain; throws DomainError off-domain or on a singular locus.
  void check_point(std::span<const double> p) const;
  void wrap(std::span<double> p) const;

  bool same_as(const Chart& other) const;

 private:
  std::string name_;
  std::vector<std::string> vars_;
  std::vector<Interval> domain_;
  std::vector<bool> periodic_;
  std::vector<std::pair<int, double>> loci_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(
    std::string name, std::vector<std::string> variables,
    std::vector<Interval> domain, std::vector<bool> periodic = {},
    std::vector<std::pair<std::string, double>> singular_loci = {});

// The 4-dimensional product chart used by the filling constructions.  The
// interval coordinate is placed first so that the product orientation is
// dt ^ (volume of the base chart).
ChartPtr product_with_interval(const ChartPtr& base, const std::string& tvar,
                               Interval range);

// Uniform sample grid on a chart.  Non-periodic axes include both
// endpoints; periodic axes drop the identified endpoint.  Samples landing
// on a singular locus are nudged into the domain by a small inset.
class Grid {
 public:
  Grid(ChartPtr chart, int points_per_axis);

  const ChartPtr& chart() const { return chart_; }
  int points_per_axis() const { return n_; }
  std::size_t size() const { return total_; }
  const std::vector<double>& axis(int i) const { return axes_[i]; }

  // Row-major iteration; the callback receives the sample point.
  void for_each(const std::function<void(std::span<const double>)>& fn) const;

  std::vector<std::vector<double>> points() const;

 private:
  ChartPtr chart_;
  int n_;
  std::size_t total_;
  std::vector<std::vector<double>> axes_;
};

}  // namespace confol
