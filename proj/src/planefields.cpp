#include "confol/planefields.hpp"

#include <cmath>
#include <limits>

namespace confol {

PlaneFieldChart::PlaneFieldChart(KForm f, std::string lbl)
    : form(std::move(f)), label(std::move(lbl)) {
  if (form.degree() != 1)
    throw Error("plane field needs a 1-form, got degree " +
                std::to_string(form.degree()));
  if (form.chart()->dim() != 3)
    throw Error("plane fields live on 3-dimensional charts");
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::PositiveContact: return "positive-contact";
    case Verdict::NegativeContact: return "negative-contact";
    case Verdict::Foliation: return "foliation";
    case Verdict::PositiveConfoliation: return "positive-confoliation";
    case Verdict::NegativeConfoliation: return "negative-confoliation";
    case Verdict::Mixed: return "mixed";
  }
  return "?";
}

namespace {

Verdict decide(double min_d, double max_d, const Margins& m) {
  if (min_d >= m.margin) return Verdict::PositiveContact;
  if (max_d <= -m.margin) return Verdict::NegativeContact;
  if (std::abs(min_d) <= m.zero_tol && std::abs(max_d) <= m.zero_tol)
    return Verdict::Foliation;
  if (min_d >= -m.zero_tol && max_d >= m.margin)
    return Verdict::PositiveConfoliation;
  if (max_d <= m.zero_tol && min_d <= -m.margin)
    return Verdict::NegativeConfoliation;
  return Verdict::Mixed;
}

}  // namespace

ClassificationReport classify_region(
    const PlaneFieldChart& pf, int grid_n,
    const std::function<bool(std::span<const double>)>& region,
    Margins margins) {
  const auto& chart = pf.chart();
  KForm density = wedge(pf.form, exterior_d(pf.form));
  const KForm::Index vol{0, 1, 2};
  ScalarExpr dens = density.coefficient(vol);

  std::vector<ScalarExpr> coefs;
  for (const auto& [idx, c] : pf.form.coefficients()) coefs.push_back(c);

  ClassificationReport report;
  report.density = density;
  report.margins = margins;
  report.grid_n = grid_n;

  double min_d = std::numeric_limits<double>::infinity();
  double max_d = -min_d;
  std::size_t count = 0;

  Grid grid(chart, grid_n);
  grid.for_each([&](std::span<const double> p) {
    if (region && !region(p)) return;
    double biggest = 0.0;
    for (const auto& c : coefs)
      biggest = std::max(biggest, std::abs(c.eval_unchecked(p)));
    if (biggest <= margins.zero_tol)
      throw PreconditionError("1-form vanishes at a sample point of chart " +
                              chart->name());
    const double d = dens.eval_unchecked(p);
    min_d = std::min(min_d, d);
    max_d = std::max(max_d, d);
    ++count;
  });
  if (count == 0) throw PreconditionError("classification region is empty");

  report.min_density = min_d;
  report.max_density = max_d;
  report.samples = count;
  report.verdict = decide(min_d, max_d, margins);
  return report;
}

ClassificationReport classify(const PlaneFieldChart& pf, int grid_n,
                              Margins margins) {
  return classify_region(pf, grid_n, nullptr, margins);
}

PlaneFieldChart normal_form(const ScalarExpr& a) {
  const auto& chart = a.chart();
  auto zi = chart->index_of("z");
  auto xi = chart->index_of("x");
  if (!zi || !xi)
    throw PreconditionError("normal form needs chart variables x and z");
  KForm f(chart, 1);
  f.add_term({*zi}, ScalarExpr::constant(1, chart));
  f.add_term({*xi}, -a);
  return PlaneFieldChart(std::move(f), "normal-form");
}

std::vector<std::vector<double>> contact_region(const PlaneFieldChart& pf,
                                                int grid_n, Margins margins) {
  KForm density = wedge(pf.form, exterior_d(pf.form));
  ScalarExpr dens = density.coefficient({0, 1, 2});
  std::vector<std::vector<double>> out;
  Grid grid(pf.chart(), grid_n);
  grid.for_each([&](std::span<const double> p) {
    if (dens.eval_unchecked(p) >= margins.margin)
      out.emplace_back(p.begin(), p.end());
  });
  return out;
}

bool adjunction_check(long pairing, long genus) {
  if (genus < 0) throw PreconditionError("negative genus");
  if (genus == 0) return pairing == 0;
  return std::abs(pairing) <= 2 * genus - 2;
}

// ---------------------------------------------------------------------
// Catalog

namespace {

double param(const std::map<std::string, double>& params,
             const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

ChartPtr cube_chart() {
  return make_chart("xyz", {"x", "y", "z"},
                    {{-1, 1}, {-1, 1}, {-1, 1}});
}

PlaneFieldChart constant_slope_field(int sign_of_y_dx, const std::string& lbl) {
  auto chart = cube_chart();
  KForm f(chart, 1);
  f.add_term({2}, ScalarExpr::constant(1, chart));
  if (sign_of_y_dx != 0) {
    auto y = ScalarExpr::var("y", chart);
    f.add_term({0}, sign_of_y_dx > 0 ? y : -y);
  }
  return PlaneFieldChart(std::move(f), lbl);
}

PlaneFieldChart lutz_field(const std::map<std::string, double>& params) {
  const double rmin = param(params, "rmin", 0.0);
  const double rmax = param(params, "rmax", M_PI);
  auto chart = make_chart("cyl", {"r", "theta", "z"},
                          {{rmin, rmax}, {0, 2 * M_PI}, {0, 1}},
                          {false, true, true}, {{"r", 0.0}});
  auto r = ScalarExpr::var("r", chart);
  KForm f(chart, 1);
  f.add_term({2}, ScalarExpr::cos(r));
  f.add_term({1}, r * ScalarExpr::sin(r));
  return PlaneFieldChart(std::move(f), "lutz");
}

PlaneFieldChart reeb_field(const std::map<std::string, double>& params) {
  const int variant = static_cast<int>(param(params, "variant", 0));
  const double half = variant == 0 ? 1.25 : 0.7;
  auto chart = make_chart("reeb", {"x", "y", "z"},
                          {{-half, half}, {-half, half}, {0, 1}},
                          {false, false, true});
  auto x = ScalarExpr::var("x", chart);
  auto y = ScalarExpr::var("y", chart);
  auto u = ScalarExpr::pow(x, 2) + ScalarExpr::pow(y, 2);
  auto one = ScalarExpr::constant(1, chart);
  auto two = ScalarExpr::constant(2, chart);
  ScalarExpr g, gp;
  if (variant == 0) {
    g = one - u;
    gp = -one;
  } else {
    // e * exp(-1/(1-u)), flat at the axis
    g = ScalarExpr::euler(chart) * ScalarExpr::exp(-(one / (one - u)));
    gp = -(g / ScalarExpr::pow(one - u, 2));
  }
  KForm f(chart, 1);
  f.add_term({0}, two * x * gp);
  f.add_term({1}, two * y * gp);
  f.add_term({2}, g);
  return PlaneFieldChart(std::move(f), "reeb");
}

PlaneFieldChart t3_field(const std::map<std::string, double>& params) {
  const double t = param(params, "t", 0.0);
  const int n = static_cast<int>(param(params, "n", 1));
  if (n < 1) throw PreconditionError("t3 frequency n must be >= 1");
  auto chart = make_chart("t3", {"x", "y", "z"}, {{0, 1}, {0, 1}, {0, 1}},
                          {true, true, true});
  auto z = ScalarExpr::var("z", chart);
  auto angle = ScalarExpr::constant(2 * n, chart) * ScalarExpr::pi(chart) * z;
  auto amp = ScalarExpr::constant_real(std::abs(t), chart);
  KForm f(chart, 1);
  f.add_term({2}, ScalarExpr::constant(1, chart));
  if (t > 0) {
    // right-handed twist: positive contact structures
    f.add_term({0}, amp * ScalarExpr::sin(angle));
    f.add_term({1}, amp * ScalarExpr::cos(angle));
  } else if (t < 0) {
    // left-handed twist: negative contact structures
    f.add_term({0}, amp * ScalarExpr::cos(angle));
    f.add_term({1}, amp * ScalarExpr::sin(angle));
  }
  return PlaneFieldChart(std::move(f), "t3");
}

PlaneFieldChart s3_field(const std::map<std::string, double>& params) {
  const double inset = param(params, "inset", 0.05);
  auto chart = make_chart("sphere", {"phi", "theta1", "theta2"},
                          {{inset, M_PI / 2 - inset}, {0, 2 * M_PI}, {0, 2 * M_PI}},
                          {false, true, true});
  auto phi = ScalarExpr::var("phi", chart);
  KForm f(chart, 1);
  f.add_term({1}, ScalarExpr::pow(ScalarExpr::sin(phi), 2));
  f.add_term({2}, ScalarExpr::pow(ScalarExpr::cos(phi), 2));
  return PlaneFieldChart(std::move(f), "s3");
}

}  // namespace

PlaneFieldChart example(const std::string& name,
                        const std::map<std::string, double>& params) {
  if (name == "xi1") return constant_slope_field(0, "xi1");
  if (name == "xi2") return constant_slope_field(-1, "xi2");  // dz - y dx
  if (name == "xi3") return constant_slope_field(+1, "xi3");  // dz + y dx
  if (name == "lutz") return lutz_field(params);
  if (name == "reeb") return reeb_field(params);
  if (name == "t3") return t3_field(params);
  if (name == "s3") return s3_field(params);
  throw Error("unknown catalog example '" + name + "'");
}

std::vector<std::string> example_names() {
  return {"xi1", "xi2", "xi3", "lutz", "reeb", "t3", "s3"};
}

}  // namespace confol
