#include "confol/perturb.hpp"

#include <algorithm>
#include <cmath>

namespace confol {

namespace {

ChartPtr line_chart(const std::string& var, double lo, double hi) {
  return make_chart("line_" + var, {var}, {{lo, hi}});
}

ScalarExpr u_var(const ChartPtr& line) {
  return ScalarExpr::var(line->variable(0), line);
}

bool interval_matches(const Interval& iv, double lo, double hi) {
  return std::abs(iv.lo - lo) < 1e-9 && std::abs(iv.hi - hi) < 1e-9;
}

}  // namespace

Cutoff::Cutoff(std::string name, ScalarExpr expr)
    : name_(std::move(name)), expr_(std::move(expr)),
      deriv_(expr_.partial(expr_.chart()->variable(0))) {
  if (expr_.chart()->dim() != 1)
    throw Error("cutoff '" + name_ + "' must be a 1-variable function");
}

double Cutoff::operator()(double u) const {
  const double p[1] = {u};
  return expr_.eval_unchecked(std::span<const double>(p, 1));
}

double Cutoff::derivative(double u) const {
  const double p[1] = {u};
  return deriv_.eval_unchecked(std::span<const double>(p, 1));
}

ScalarExpr Cutoff::of(const ScalarExpr& arg) const {
  return expr_.substitute({{0, arg}}, arg.chart());
}

ScalarExpr Cutoff::derivative_of(const ScalarExpr& arg) const {
  return deriv_.substitute({{0, arg}}, arg.chart());
}

void Cutoff::require_value(double u, double expected, double tol) const {
  const double v = (*this)(u);
  if (std::abs(v - expected) > tol)
    throw VerificationError("cutoff " + name_ + ": value at " +
                            std::to_string(u) + " is " + std::to_string(v) +
                            ", expected " + std::to_string(expected));
}

namespace {
void scan(const Cutoff& cut, double lo, double hi, int n, bool derivative,
          bool is_min, double bound) {
  for (int k = 0; k <= n; ++k) {
    const double u = lo + (hi - lo) * k / n;
    const double v = derivative ? cut.derivative(u) : cut(u);
    const bool ok = is_min ? v >= bound : v <= bound;
    if (!ok)
      throw VerificationError(
          "cutoff " + cut.name() + ": " + (derivative ? "derivative " : "") +
          std::string(is_min ? "min" : "max") + " bound " +
          std::to_string(bound) + " violated at " + std::to_string(u) +
          " (value " + std::to_string(v) + ")");
  }
}
}  // namespace

void Cutoff::require_min(double lo, double hi, double bound, int n) const {
  scan(*this, lo, hi, n, false, true, bound);
}
void Cutoff::require_max(double lo, double hi, double bound, int n) const {
  scan(*this, lo, hi, n, false, false, bound);
}
void Cutoff::require_derivative_min(double lo, double hi, double bound,
                                    int n) const {
  scan(*this, lo, hi, n, true, true, bound);
}
void Cutoff::require_derivative_max(double lo, double hi, double bound,
                                    int n) const {
  scan(*this, lo, hi, n, true, false, bound);
}

// ---------------------------------------------------------------------
// Concrete cutoffs

namespace {

// clamp to [0,1] built from pos, exact outside the ramp
ScalarExpr clamp01(const ScalarExpr& u) {
  auto one = ScalarExpr::constant(1, u.chart());
  return ScalarExpr::pos(u) - ScalarExpr::pos(u - one);
}

ScalarExpr quintic_of(const ScalarExpr& c) {
  auto k6 = ScalarExpr::constant(6, c.chart());
  auto k15 = ScalarExpr::constant(15, c.chart());
  auto k10 = ScalarExpr::constant(10, c.chart());
  return k6 * ScalarExpr::pow(c, 5) - k15 * ScalarExpr::pow(c, 4) +
         k10 * ScalarExpr::pow(c, 3);
}

}  // namespace

Cutoff quintic_step() {
  auto line = line_chart("u", -1.0, 2.0);
  Cutoff s("quintic_step", quintic_of(clamp01(u_var(line))));
  s.require_value(0.0, 0.0);
  s.require_value(1.0, 1.0);
  s.require_value(-0.5, 0.0);
  s.require_value(1.5, 1.0);
  s.require_derivative_min(-1.0, 2.0, 0.0);
  return s;
}

Cutoff plateau_bump(double w0, double w1) {
  if (!(w0 < w1)) throw PreconditionError("plateau bump needs w0 < w1");
  auto line = line_chart("w", std::min(0.0, w0 - 1), w1 + 1);
  auto w = u_var(line);
  auto arg = (ScalarExpr::constant_real(w1, line) - w) /
             ScalarExpr::constant_real(w1 - w0, line);
  Cutoff g("plateau_bump", quintic_of(clamp01(arg)));
  g.require_value(w0, 1.0);
  g.require_value(w1, 0.0);
  g.require_value(w1 + 0.5, 0.0);
  g.require_min(w0 - 0.5, w1 + 0.5, 0.0);
  g.require_max(w0 - 0.5, w1 + 0.5, 1.0);
  g.require_derivative_max(w0, w1, 0.0);
  return g;
}

Cutoff quadratic_decay() {
  auto line = line_chart("u", 0.0, 2.0);
  auto one = ScalarExpr::constant(1, line);
  Cutoff h("quadratic_decay", ScalarExpr::pow(ScalarExpr::pos(one - u_var(line)), 2));
  h.require_value(0.0, 1.0);
  h.require_value(1.0, 0.0);
  h.require_value(1.5, 0.0);
  h.require_derivative_max(0.0, 2.0, 0.0);
  return h;
}

Cutoff shear_profile(double depth) {
  if (depth <= 0) throw PreconditionError("shear profile needs depth > 0");
  auto line = line_chart("z", 0.0, 1.0);
  auto z = u_var(line);
  auto half = ScalarExpr::constant(Rational(1, 2), line);
  auto d = ScalarExpr::constant_real(depth, line);
  Cutoff h("shear_profile",
           -(d * ScalarExpr::pos(z) * ScalarExpr::pos(half - z)));
  h.require_value(0.0, 0.0);
  h.require_value(0.5, 0.0);
  h.require_value(0.75, 0.0);
  h.require_max(0.0, 1.0, 0.0);
  h.require_max(0.1, 0.4, -depth * 0.1 * 0.1);  // strictly negative inside
  return h;
}

Cutoff symmetric_bump(double eps) {
  if (eps <= 0) throw PreconditionError("bump needs eps > 0");
  auto line = line_chart("z", -1.0, 1.0);
  auto z = u_var(line);
  auto one = ScalarExpr::constant(1, line);
  auto s = z / ScalarExpr::constant_real(eps, line);
  Cutoff b("symmetric_bump",
           ScalarExpr::pow(ScalarExpr::pos(one - ScalarExpr::pow(s, 2)), 3));
  b.require_value(0.0, 1.0);
  b.require_value(eps, 0.0);
  b.require_value(-eps, 0.0);
  b.require_min(-1.0, 1.0, 0.0);
  return b;
}

Cutoff build_f(double m, double delta, double bound) {
  if (m <= 0 || bound <= 0 || delta <= 0 || delta >= 1)
    throw PreconditionError("build_f needs m > 0, bound > 0, delta in (0,1)");
  const double rise_end = 1.0 - delta;
  const double base = 0.05 * bound;
  const double amp = 0.90 * bound;
  // quintic step derivative peaks at 1.875; keep the down ramp above -m
  const double drop = std::min(amp / 2, 0.5 * m * delta / 1.875);

  auto line = line_chart("y", 0.0, 1.0);
  auto y = u_var(line);
  auto up = quintic_of(clamp01(y / ScalarExpr::constant_real(rise_end, line)));
  auto down = quintic_of(clamp01(
      (y - ScalarExpr::constant_real(rise_end, line)) /
      ScalarExpr::constant_real(delta, line)));
  Cutoff f("tangent_arc_profile",
           ScalarExpr::constant_real(base, line) +
               ScalarExpr::constant_real(amp, line) * up -
               ScalarExpr::constant_real(drop, line) * down);

  f.require_min(0.0, 1.0, base / 2);                    // positive
  f.require_max(0.0, 1.0, bound);                       // sup f <= bound
  // strictly increasing on the open rise, derivative in (-m, 0] on the drop
  const int n = 401;
  for (int k = 1; k < n; ++k) {
    const double yy = rise_end * k / n;
    if (!(f.derivative(yy) > 0))
      throw VerificationError("build_f: profile not increasing at " +
                              std::to_string(yy));
  }
  f.require_derivative_min(rise_end, 1.0, -m * (1.0 - 1e-9));
  f.require_derivative_max(rise_end, 1.0, 0.0);
  return f;
}

// ---------------------------------------------------------------------
// Operators

namespace {

std::function<bool(std::span<const double>)> strict_interior(
    const ChartPtr& chart) {
  return [chart](std::span<const double> p) {
    for (int i = 0; i < chart->dim(); ++i) {
      if (chart->periodic(i)) continue;
      const auto& iv = chart->interval(i);
      if (p[i] <= iv.lo + 1e-12 || p[i] >= iv.hi - 1e-12) return false;
    }
    return true;
  };
}

void require_tangent_arc_chart(const ChartPtr& chart) {
  if (!chart->index_of("x") || !chart->index_of("y") || !chart->index_of("z"))
    throw PreconditionError("tangent arc needs chart variables x, y, z");
  if (!interval_matches(chart->interval(*chart->index_of("x")), -1, 1) ||
      !interval_matches(chart->interval(*chart->index_of("y")), 0, 1) ||
      !interval_matches(chart->interval(*chart->index_of("z")), -1, 1))
    throw PreconditionError(
        "tangent arc operates on the neighborhood [-1,1]x[0,1]x[-1,1]");
}

}  // namespace

PerturbResult tangent_arc_contactize(const ScalarExpr& a, double t,
                                     const CutoffSpec& cut,
                                     const PerturbOptions& opts) {
  const auto& chart = a.chart();
  require_tangent_arc_chart(chart);
  if (!cut.g || !cut.f)
    throw PreconditionError("tangent arc needs the g and f cutoffs");
  if (t <= 0) {
    if (t < 0) throw PreconditionError("tangent arc parameter must be >= 0");
    // t = 0 is the identity perturbation
    auto before = classify(normal_form(a), opts.grid_n, opts.margins);
    return {normal_form(a), 0.0, before, before};
  }

  auto before = classify(normal_form(a), opts.grid_n, opts.margins);
  if (before.verdict != Verdict::PositiveConfoliation &&
      before.verdict != Verdict::PositiveContact)
    throw PreconditionError("tangent arc input must be a positive "
                            "confoliation, classification says " +
                            verdict_name(before.verdict));

  // contact near the top of the y-interval
  {
    auto ay = a.partial("y");
    Grid grid(chart, opts.grid_n);
    const int yi = *chart->index_of("y");
    bool band_seen = false;
    grid.for_each([&](std::span<const double> p) {
      if (p[yi] < 1.0 - cut.delta - 1e-12) return;
      band_seen = true;
      if (ay.eval_unchecked(p) < opts.margins.margin)
        throw PreconditionError(
            "tangent arc needs da/dy >= margin on the band near y = 1");
    });
    if (!band_seen)
      throw PreconditionError("tangent arc band near y = 1 has no samples");
  }

  auto x = ScalarExpr::var("x", chart);
  auto z = ScalarExpr::var("z", chart);
  auto y = ScalarExpr::var("y", chart);
  auto window = cut.g->of(ScalarExpr::pow(x, 2)) *
                cut.g->of(ScalarExpr::pow(z, 2)) * cut.f->of(y);

  auto interior = strict_interior(chart);
  double tk = t;
  for (int attempt = 0; attempt < opts.retries; ++attempt, tk /= 2) {
    auto perturbed = a + ScalarExpr::constant_real(tk, chart) * window;
    auto pf = normal_form(perturbed);
    auto report = classify_region(pf, opts.grid_n, interior, opts.margins);
    if (report.verdict == Verdict::PositiveContact)
      return {std::move(pf), tk, before, report};
  }
  throw VerificationError(
      "tangent arc scan exhausted without reaching interior contact");
}

PerturbResult holonomy_contactize(const ScalarExpr& a, const Cutoff& h,
                                  double eps,
                                  const HolonomyContactizeOptions& opts) {
  const auto& chart = a.chart();
  if (!chart->index_of("x") || !chart->index_of("y") || !chart->index_of("z"))
    throw PreconditionError("holonomy contactization needs variables x, y, z");
  if (a.depends_on("y"))
    throw PreconditionError("slope function must depend on (x, z) only");

  h.require_value(0.0, 1.0, 1e-9);
  h.require_value(1.0, 0.0, 1e-9);
  h.require_derivative_max(0.0, 1.0, 1e-12);

  const int yi = *chart->index_of("y");
  const int zi = *chart->index_of("z");
  auto az = a.partial("z");

  Grid grid(chart, opts.grid_n);
  grid.for_each([&](std::span<const double> p) {
    if (-az.eval_unchecked(p) < opts.margins.margin)
      throw PreconditionError("holonomy contactization needs -da/dz >= C > 0");
  });
  grid.for_each([&](std::span<const double> p) {
    std::vector<double> q(p.begin(), p.end());
    q[zi] = 0.0;
    if (std::abs(a.eval_unchecked(q)) > 1e-9)
      throw PreconditionError("slope function must vanish on {z = 0}");
  });

  auto y = ScalarExpr::var("y", chart);
  auto z = ScalarExpr::var("z", chart);
  auto u = ScalarExpr::pow(y, 2) + ScalarExpr::pow(z, 2);
  auto two = ScalarExpr::constant(2, chart);

  // mixed density -a_z h + 2 z a h'
  auto mixed = -(az * h.of(u)) + two * z * a * h.derivative_of(u);
  {
    const double cap = 1.0 - opts.rim;
    Grid g2(chart, opts.grid_n);
    g2.for_each([&](std::span<const double> p) {
      if (p[yi] * p[yi] + p[zi] * p[zi] >= cap) return;
      if (mixed.eval_unchecked(p) < opts.margins.margin)
        throw PreconditionError("mixed density below margin inside the tube");
    });
  }

  auto before = classify(normal_form(a), opts.grid_n, opts.margins);

  KForm form(chart, 1);
  form.add_term({zi}, ScalarExpr::constant(1, chart));
  form.add_term({*chart->index_of("x")}, -a);
  form.add_term({yi}, ScalarExpr::constant_real(eps, chart) * h.of(u));
  PlaneFieldChart pf(std::move(form), "holonomy-contactized");

  const double cap = 1.0 - opts.rim;
  auto inside = [yi, zi, cap](std::span<const double> p) {
    return p[yi] * p[yi] + p[zi] * p[zi] < cap;
  };
  auto after = classify_region(pf, opts.grid_n, inside, opts.margins);
  if (eps > 0 && after.verdict != Verdict::PositiveContact)
    throw VerificationError("holonomy contactization failed to reach contact "
                            "inside the tube (verdict " +
                            verdict_name(after.verdict) + ")");
  return {std::move(pf), eps, before, after};
}

ChartPtr shear_chart() {
  return make_chart("shear", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {0, 1}},
                    {false, true, true});
}

PlaneFieldChart shear_foliation(const Cutoff& g, const Cutoff& h) {
  g.require_min(-1.0, 1.0, 0.0);
  g.require_value(-1.0, 0.0, 1e-9);
  g.require_value(1.0, 0.0, 1e-9);
  g.require_min(-0.5, 0.5, 1e-6);  // positive in the middle
  h.require_value(0.0, 0.0, 1e-12);
  h.require_value(0.5, 0.0, 1e-12);
  h.require_max(0.0, 1.0, 0.0);
  h.require_max(0.05, 0.45, -1e-6);  // strictly negative on (0, 1/2)
  for (int k = 0; k <= 100; ++k) {   // vanishes on the other half
    const double z = 0.5 + 0.005 * k;
    if (std::abs(h(z)) > 1e-12)
      throw VerificationError("shear profile must vanish on [1/2, 1]");
  }

  auto chart = shear_chart();
  auto yv = ScalarExpr::var("y", chart);
  auto zv = ScalarExpr::var("z", chart);
  KForm form(chart, 1);
  form.add_term({2}, ScalarExpr::constant(1, chart));
  form.add_term({1}, g.of(yv) * h.of(zv));
  return PlaneFieldChart(std::move(form), "shear-foliation");
}

SampledDiffeo monotone_graph_diffeo(const SampledFamily& v, double eps,
                                    const DiffeoOptions& opts) {
  if (v.zs.size() < 5 || v.members.empty())
    throw PreconditionError("diffeo needs a sampled family on >= 5 points");
  for (const auto& m : v.members)
    if (m.size() != v.zs.size())
      throw PreconditionError("family member sample count mismatch");
  // v_x(0) = 0 for every member
  {
    std::size_t zero_at = v.zs.size();
    for (std::size_t i = 0; i < v.zs.size(); ++i)
      if (std::abs(v.zs[i]) < 1e-12) zero_at = i;
    if (zero_at == v.zs.size())
      throw PreconditionError("sample grid must contain z = 0");
    for (const auto& m : v.members)
      if (std::abs(m[zero_at]) > 1e-9)
        throw PreconditionError("family members must vanish at z = 0");
  }
  if (eps <= 0 || eps > 1)
    throw PreconditionError("diffeo support eps must lie in (0, 1]");

  Cutoff sigma = symmetric_bump(eps);
  auto line = sigma.line();
  auto z = ScalarExpr::var(line->variable(0), line);

  auto interp = [&](const std::vector<double>& vals, double x) {
    auto it = std::lower_bound(v.zs.begin(), v.zs.end(), x);
    if (it == v.zs.begin()) return vals.front();
    if (it == v.zs.end()) return vals.back();
    const std::size_t i = it - v.zs.begin();
    const double x1 = v.zs[i - 1], x2 = v.zs[i];
    const double t = (x - x1) / (x2 - x1);
    return vals[i - 1] + t * (vals[i] - vals[i - 1]);
  };

  double c = opts.initial_c >= 0 ? opts.initial_c : 0.2 * eps;
  for (int attempt = 0; attempt < opts.retries; ++attempt, c /= 2) {
    auto f_expr = z - ScalarExpr::constant_real(c, line) * sigma.expr();
    auto fp_expr = f_expr.partial(line->variable(0));
    auto fv = [&](double x) {
      const double p[1] = {x};
      return f_expr.eval_unchecked(std::span<const double>(p, 1));
    };
    auto fpv = [&](double x) {
      const double p[1] = {x};
      return fp_expr.eval_unchecked(std::span<const double>(p, 1));
    };

    bool ok = true;
    for (std::size_t i = 0; i < v.zs.size() && ok; ++i) {
      const double zz = v.zs[i];
      if (fpv(zz) <= 0) ok = false;  // must stay a diffeomorphism
      if (std::abs(zz) >= eps * (1 - 1e-12)) continue;
      if (std::abs(zz) >= 1 - 1e-12) continue;
      for (const auto& m : v.members) {
        const double lhs = fpv(zz) * m[i];
        const double rhs = interp(m, fv(zz));
        if (!(lhs > rhs + opts.tol)) {
          ok = false;
          break;
        }
      }
    }
    if (ok && c > 0) {
      SampledDiffeo out;
      out.zs = v.zs;
      out.fs.reserve(v.zs.size());
      for (double zz : v.zs) out.fs.push_back(fv(zz));
      out.c = c;
      out.f_expr = f_expr;
      out.fprime_expr = fp_expr;
      return out;
    }
  }
  throw VerificationError(
      "graph diffeomorphism scan exhausted without strict inequality");
}

PerturbResult interpolate_plane_fields(const ScalarExpr& a0,
                                       const ScalarExpr& a1,
                                       const PerturbOptions& opts) {
  const auto& chart = a0.chart();
  if (!chart->same_as(*a1.chart()))
    throw PreconditionError("slope functions live on different charts");
  if (!chart->index_of("x") || !chart->index_of("y") || !chart->index_of("z"))
    throw PreconditionError("interpolation needs chart variables x, y, z");
  if (a0.depends_on("y") || a1.depends_on("y"))
    throw PreconditionError("slope functions must depend on (x, z) only");

  // strict pointwise ordering a1 <= a0 - margin
  {
    Grid grid(chart, opts.grid_n);
    grid.for_each([&](std::span<const double> p) {
      if (a0.eval_unchecked(p) - a1.eval_unchecked(p) < opts.margins.margin)
        throw PreconditionError("slope ordering a1 <= a0 - margin violated");
    });
  }

  auto y = ScalarExpr::var("y", chart);
  auto half = ScalarExpr::constant(Rational(1, 2), chart);
  // linear ramp 0 -> 1 across y in (-1/2, 1/2); exact outside
  auto ramp = ScalarExpr::pos(y + half) - ScalarExpr::pos(y - half);
  auto blended = a1 + (a0 - a1) * ramp;

  auto pf = normal_form(blended);
  auto before = classify(normal_form(a0), opts.grid_n, opts.margins);
  const int yi = *chart->index_of("y");
  auto transition = [yi](std::span<const double> p) {
    return std::abs(p[yi]) < 0.5 - 1e-9;
  };
  auto after = classify_region(pf, opts.grid_n, transition, opts.margins);
  if (after.verdict != Verdict::PositiveContact)
    throw VerificationError("interpolation region failed to classify as "
                            "positive contact (verdict " +
                            verdict_name(after.verdict) + ")");
  return {std::move(pf), 0.0, before, after};
}

}  // namespace confol
