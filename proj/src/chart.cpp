#include "confol/chart.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace confol {

Chart::Chart(std::string name, std::vector<std::string> variables,
             std::vector<Interval> domain, std::vector<bool> periodic)
    : name_(std::move(name)),
      vars_(std::move(variables)),
      domain_(std::move(domain)),
      periodic_(std::move(periodic)) {
  if (vars_.empty()) throw Error("chart needs at least one variable");
  if (domain_.size() != vars_.size())
    throw Error("chart '" + name_ + "': domain size mismatch");
  if (periodic_.empty()) periodic_.assign(vars_.size(), false);
  if (periodic_.size() != vars_.size())
    throw Error("chart '" + name_ + "': periodic flag size mismatch");
  std::set<std::string> seen;
  for (const auto& v : vars_)
    if (!seen.insert(v).second)
      throw Error("chart '" + name_ + "': duplicate variable " + v);
  for (const auto& iv : domain_)
    if (!(iv.lo < iv.hi))
      throw Error("chart '" + name_ + "': empty domain interval");
}

std::optional<int> Chart::index_of(const std::string& var) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == var) return static_cast<int>(i);
  return std::nullopt;
}

void Chart::add_singular_locus(const std::string& var, double value) {
  auto idx = index_of(var);
  if (!idx) throw Error("chart '" + name_ + "': unknown variable " + var);
  loci_.emplace_back(*idx, value);
}

void Chart::wrap(std::span<double> p) const {
  for (int i = 0; i < dim(); ++i) {
    if (!periodic_[i]) continue;
    const double lo = domain_[i].lo, span = domain_[i].hi - lo;
    double x = std::fmod(p[i] - lo, span);
    if (x < 0) x += span;
    p[i] = lo + x;
  }
}

void Chart::check_point(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim())
    throw DomainError("point dimension mismatch on chart " + name_);
  for (int i = 0; i < dim(); ++i) {
    if (periodic_[i]) continue;
    const auto& iv = domain_[i];
    const double slack = 1e-9 * (1.0 + iv.hi - iv.lo);
    if (p[i] < iv.lo - slack || p[i] > iv.hi + slack)
      throw DomainError("coordinate " + vars_[i] + " = " +
                        std::to_string(p[i]) + " outside domain of chart " +
                        name_);
  }
  for (const auto& [axis, value] : loci_) {
    if (std::abs(p[axis] - value) < 1e-12)
      throw DomainError("evaluation on singular locus " + vars_[axis] + " = " +
                        std::to_string(value) + " of chart " + name_);
  }
}

bool Chart::same_as(const Chart& other) const {
  return this == &other ||
         (vars_ == other.vars_ && name_ == other.name_);
}

ChartPtr make_chart(std::string name, std::vector<std::string> variables,
                    std::vector<Interval> domain, std::vector<bool> periodic,
                    std::vector<std::pair<std::string, double>> singular_loci) {
  auto chart = std::make_shared<Chart>(std::move(name), std::move(variables),
                                       std::move(domain), std::move(periodic));
  for (const auto& [var, value] : singular_loci)
    chart->add_singular_locus(var, value);
  return chart;
}

ChartPtr product_with_interval(const ChartPtr& base, const std::string& tvar,
                               Interval range) {
  if (base->index_of(tvar))
    throw Error("product chart: variable " + tvar + " already used");
  std::vector<std::string> vars{tvar};
  std::vector<Interval> dom{range};
  std::vector<bool> per{false};
  for (int i = 0; i < base->dim(); ++i) {
    vars.push_back(base->variable(i));
    dom.push_back(base->interval(i));
    per.push_back(base->periodic(i));
  }
  auto chart = std::make_shared<Chart>(base->name() + "x" + tvar,
                                       std::move(vars), std::move(dom),
                                       std::move(per));
  for (const auto& [axis, value] : base->singular_loci())
    chart->add_singular_locus(base->variable(axis), value);
  return chart;
}

Grid::Grid(ChartPtr chart, int points_per_axis)
    : chart_(std::move(chart)), n_(points_per_axis) {
  if (n_ < 3) throw PreconditionError("grid resolution must be >= 3 per axis");
  const int d = chart_->dim();
  axes_.resize(d);
  total_ = 1;
  for (int i = 0; i < d; ++i) {
    const auto& iv = chart_->interval(i);
    const bool per = chart_->periodic(i);
    const int count = n_;
    const double step = (iv.hi - iv.lo) / (per ? count : count - 1);
    axes_[i].resize(count);
    for (int k = 0; k < count; ++k) axes_[i][k] = iv.lo + k * step;
    // keep samples off declared singular loci
    const double inset = std::max(1e-8, (iv.hi - iv.lo) * 1e-4);
    for (const auto& [axis, value] : chart_->singular_loci()) {
      if (axis != i) continue;
      for (auto& x : axes_[i]) {
        if (std::abs(x - value) < 1e-12) {
          x = (value + inset <= iv.hi) ? value + inset : value - inset;
        }
      }
    }
    total_ *= static_cast<std::size_t>(count);
  }
}

void Grid::for_each(
    const std::function<void(std::span<const double>)>& fn) const {
  const int d = chart_->dim();
  std::vector<int> idx(d, 0);
  std::vector<double> pt(d);
  for (std::size_t c = 0; c < total_; ++c) {
    for (int i = 0; i < d; ++i) pt[i] = axes_[i][idx[i]];
    fn(pt);
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < static_cast<int>(axes_[i].size())) break;
      idx[i] = 0;
    }
  }
}

std::vector<std::vector<double>> Grid::points() const {
  std::vector<std::vector<double>> out;
  out.reserve(total_);
  for_each([&](std::span<const double> p) {
    out.emplace_back(p.begin(), p.end());
  });
  return out;
}

}  // namespace confol
