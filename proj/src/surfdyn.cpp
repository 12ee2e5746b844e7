#include "confol/surfdyn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace confol {

namespace {

struct PulledBackForm {
  ScalarExpr p, q;  // du and dv coefficients

  double pv(std::span<const double> at) const { return p.eval_unchecked(at); }
  double qv(std::span<const double> at) const { return q.eval_unchecked(at); }
};

PulledBackForm pull_to_parameters(const PlaneFieldChart& pf,
                                  const ChartMap& map) {
  KForm restricted = pullback(map, pf.form);
  return {restricted.coefficient({0}), restricted.coefficient({1})};
}

}  // namespace

CharFoliation characteristic_foliation(
    const PlaneFieldChart& pf, const SurfacePatch& surface,
    const std::vector<std::array<double, 2>>& seeds,
    const CharFoliationOptions& opts) {
  if (!surface.map.target->same_as(*pf.chart()))
    throw Error("surface patch targets a different chart than the plane field");
  if (opts.check_immersion) surface.check_immersion();

  CharFoliation out;
  auto [p, q] = pull_to_parameters(pf, surface.map);
  out.p = p;
  out.q = q;

  const auto& param = surface.map.source;
  Grid grid(param, opts.singular_grid_n);

  // singular nodes on the parameter grid
  const auto& us = grid.axis(0);
  const auto& vs = grid.axis(1);
  const int nu = static_cast<int>(us.size());
  const int nv = static_cast<int>(vs.size());
  std::vector<char> singular(static_cast<std::size_t>(nu) * nv, 0);
  std::vector<double> residual(static_cast<std::size_t>(nu) * nv, 0.0);
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const double pt[2] = {us[i], vs[j]};
      const double a = p.eval_unchecked(std::span<const double>(pt, 2));
      const double b = q.eval_unchecked(std::span<const double>(pt, 2));
      const double res = std::hypot(a, b);
      residual[i * nv + j] = res;
      if (std::abs(a) <= opts.singular_tol && std::abs(b) <= opts.singular_tol) {
        singular[i * nv + j] = 1;
        out.singular_nodes.push_back({us[i], vs[j], res});
      }
    }
  }

  // clusters via flood fill, wrapping over periodic parameter axes
  std::vector<char> seen(singular.size(), 0);
  const bool wrap_u = param->periodic(0);
  const bool wrap_v = param->periodic(1);
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      if (!singular[i * nv + j] || seen[i * nv + j]) continue;
      SingularCluster cluster;
      std::vector<std::pair<int, int>> stack{{i, j}};
      seen[i * nv + j] = 1;
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        cluster.nodes.push_back({us[a], vs[b], residual[a * nv + b]});
        const int da[4] = {1, -1, 0, 0};
        const int db[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int na = a + da[k], nb = b + db[k];
          if (wrap_u) na = (na + nu) % nu;
          if (wrap_v) nb = (nb + nv) % nv;
          if (na < 0 || na >= nu || nb < 0 || nb >= nv) continue;
          if (!singular[na * nv + nb] || seen[na * nv + nb]) continue;
          seen[na * nv + nb] = 1;
          stack.emplace_back(na, nb);
        }
      }
      cluster.representative = cluster.nodes.front();
      for (const auto& n : cluster.nodes)
        if (n.residual < cluster.representative.residual)
          cluster.representative = n;
      out.clusters.push_back(std::move(cluster));
    }
  }

  // streamlines of the kernel line field, direction (-q, p) with the sign
  // matched to the previous tangent
  const auto& dom_u = param->interval(0);
  const auto& dom_v = param->interval(1);
  auto inside = [&](double u, double v) {
    const bool ok_u = wrap_u || (u >= dom_u.lo && u <= dom_u.hi);
    const bool ok_v = wrap_v || (v >= dom_v.lo && v <= dom_v.hi);
    return ok_u && ok_v;
  };

  for (const auto& seed : seeds) {
    Streamline line;
    double u = seed[0], v = seed[1], s = 0.0;
    double prev[2] = {0.0, 0.0};
    bool have_prev = false;
    line.samples.push_back({s, u, v});
    long step_count = 0;
    for (;;) {
      if (++step_count > opts.step_limit) {
        line.reason = Termination::StepLimit;
        break;
      }
      auto field = [&](double au, double av, double* du, double* dv) -> bool {
        const double pt[2] = {au, av};
        const double a = p.eval_unchecked(std::span<const double>(pt, 2));
        const double b = q.eval_unchecked(std::span<const double>(pt, 2));
        const double n = std::hypot(a, b);
        if (n < opts.singular_tol) return false;
        double x = -b / n, y = a / n;
        if (have_prev && x * prev[0] + y * prev[1] < 0) {
          x = -x;
          y = -y;
        }
        *du = x;
        *dv = y;
        return true;
      };
      double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
      const double h = opts.step;
      if (!field(u, v, &k1u, &k1v)) {
        line.reason = Termination::Singularity;
        break;
      }
      bool ok = field(u + 0.5 * h * k1u, v + 0.5 * h * k1v, &k2u, &k2v) &&
                field(u + 0.5 * h * k2u, v + 0.5 * h * k2v, &k3u, &k3v) &&
                field(u + h * k3u, v + h * k3v, &k4u, &k4v);
      if (!ok) {
        line.reason = Termination::Singularity;
        break;
      }
      const double du = (k1u + 2 * k2u + 2 * k3u + k4u) / 6.0;
      const double dv = (k1v + 2 * k2v + 2 * k3v + k4v) / 6.0;
      prev[0] = du;
      prev[1] = dv;
      have_prev = true;
      u += h * du;
      v += h * dv;
      s += h;
      if (!inside(u, v)) {
        line.samples.push_back({s, u, v});
        line.reason = Termination::Boundary;
        break;
      }
      if (step_count % opts.record_every == 0) line.samples.push_back({s, u, v});
      const double loop_u = wrap_u ? std::remainder(u - seed[0], dom_u.hi - dom_u.lo)
                                   : u - seed[0];
      const double loop_v = wrap_v ? std::remainder(v - seed[1], dom_v.hi - dom_v.lo)
                                   : v - seed[1];
      if (step_count > 20 && std::hypot(loop_u, loop_v) < h) {
        line.samples.push_back({s, u, v});
        line.reason = Termination::Closed;
        break;
      }
    }
    out.streamlines.push_back(std::move(line));
  }
  return out;
}

// ---------------------------------------------------------------------
// Holonomy

TransverseAnnulus::TransverseAnnulus(ChartMap m) : embedding(std::move(m)) {
  const auto& src = embedding.source;
  if (src->dim() != 2)
    throw Error("transverse annulus needs a 2-dimensional parameter chart");
  const auto& w = src->interval(0);
  if (std::abs(w.lo + w.hi) > 1e-12)
    throw Error("annulus transversal interval must be symmetric about 0");
  if (!src->periodic(1))
    throw Error("annulus loop coordinate must be periodic");
}

std::optional<double> ReturnMap::apply(double x) const {
  if (samples.size() < 2) return std::nullopt;
  if (x < samples.front().first || x > samples.back().first)
    return std::nullopt;
  auto it = std::lower_bound(
      samples.begin(), samples.end(), x,
      [](const std::pair<double, double>& s, double v) { return s.first < v; });
  if (it == samples.begin()) return it->second;
  if (it == samples.end()) return samples.back().second;
  const auto& [x1, y1] = *std::prev(it);
  const auto& [x2, y2] = *it;
  if (x2 == x1) return y1;
  const double t = (x - x1) / (x2 - x1);
  return y1 + t * (y2 - y1);
}

ReturnMap holonomy_return_map(const PlaneFieldChart& fol,
                              const TransverseAnnulus& annulus, int direction,
                              const HolonomyOptions& opts) {
  if (direction != 1 && direction != -1)
    throw PreconditionError("holonomy direction must be +1 or -1");
  if (opts.verify_foliation) {
    auto report = classify(fol, opts.verify_grid_n);
    if (report.verdict != Verdict::Foliation)
      throw PreconditionError(
          "holonomy requires a foliation, classification says " +
          verdict_name(report.verdict));
  }

  auto [p, q] = pull_to_parameters(fol, annulus.embedding);
  const double eps = annulus.eps();
  const double period = annulus.period();
  const double v0 = annulus.base();

  // invariant: the annulus is transverse to the plane field and the
  // transversal is transverse to the induced foliation
  {
    Grid grid(annulus.embedding.source, 15);
    grid.for_each([&](std::span<const double> pt) {
      const double a = p.eval_unchecked(pt);
      const double b = q.eval_unchecked(pt);
      if (std::hypot(a, b) <= opts.tol)
        throw PreconditionError("annulus tangent to the plane field at (w=" +
                                std::to_string(pt[0]) + ", v=" +
                                std::to_string(pt[1]) + ")");
    });
    for (int k = 0; k <= 10; ++k) {
      const double pt[2] = {-0.8 * eps + 0.16 * eps * k, v0};
      if (std::abs(p.eval_unchecked(std::span<const double>(pt, 2))) <= opts.tol)
        throw PreconditionError(
            "transversal tangent to the induced foliation on the annulus");
    }
  }

  ReturnMap rm;
  const int n = std::max(5, opts.seeds) | 1;  // odd, so 0 is a seed
  const double span = opts.seed_span * eps;
  const double h = period / opts.steps_per_loop * direction;
  const long steps = static_cast<long>(opts.steps_per_loop) * opts.loops;

  for (int i = 0; i < n; ++i) {
    const double x0 = -span + 2 * span * i / (n - 1);
    double w = x0, v = v0;
    bool alive = true;
    auto slope = [&](double aw, double av, double* out) -> bool {
      const double pt[2] = {aw, av};
      const double a = p.eval_unchecked(std::span<const double>(pt, 2));
      const double b = q.eval_unchecked(std::span<const double>(pt, 2));
      if (std::abs(a) <= opts.tol) return false;  // leaf turns vertical
      *out = -b / a;
      return true;
    };
    for (long sct = 0; sct < steps && alive; ++sct) {
      double k1, k2, k3, k4;
      alive = slope(w, v, &k1) && slope(w + 0.5 * h * k1, v + 0.5 * h, &k2) &&
              slope(w + 0.5 * h * k2, v + 0.5 * h, &k3) &&
              slope(w + h * k3, v + h, &k4);
      if (!alive) break;
      w += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      v += h;
      if (std::abs(w) >= eps) {
        alive = false;  // the lift ran off the annulus
        break;
      }
    }
    if (alive) rm.samples.emplace_back(x0, w);
  }
  if (rm.samples.empty())
    throw VerificationError("no holonomy seed completed the loop");
  std::sort(rm.samples.begin(), rm.samples.end());

  // derivative at 0 from the sample pairs nearest the origin, Richardson
  // extrapolated over the two spacings
  auto phi_at = [&](double x) -> std::optional<double> {
    for (const auto& [a, b] : rm.samples)
      if (std::abs(a - x) < 1e-12) return b;
    return std::nullopt;
  };
  const double hseed = 2 * span / (n - 1);
  auto d_of = [&](double step_x) -> std::optional<double> {
    auto up = phi_at(step_x), dn = phi_at(-step_x);
    if (!up || !dn) return std::nullopt;
    return (*up - *dn) / (2 * step_x);
  };
  auto d1 = d_of(hseed), d2 = d_of(2 * hseed);
  if (d1 && d2)
    rm.derivative_at_zero = (4 * *d1 - *d2) / 3.0;
  else if (d1)
    rm.derivative_at_zero = *d1;

  // fixed points: the origin, plus interior sign changes of phi(x) - x
  rm.fixed_points.push_back({0.0, rm.derivative_at_zero});
  for (std::size_t i = 0; i + 1 < rm.samples.size(); ++i) {
    const auto& [x1, y1] = rm.samples[i];
    const auto& [x2, y2] = rm.samples[i + 1];
    const double d1 = y1 - x1, d2 = y2 - x2;
    if (x1 <= 0 && x2 >= 0) continue;  // origin already recorded
    if ((d1 < 0) == (d2 < 0) || d1 == d2) continue;
    const double t = d1 / (d1 - d2);
    const double xf = x1 + t * (x2 - x1);
    const double deriv = (x2 == x1) ? 1.0 : (y2 - y1) / (x2 - x1);
    rm.fixed_points.push_back({xf, deriv});
  }
  return rm;
}

HolonomyClass classify_holonomy(const ReturnMap& rm,
                                const HolonomyClassOptions& opts) {
  int pos = 0, neg = 0;
  for (const auto& [x, y] : rm.samples) {
    if (x > opts.tol) ++pos;
    if (x < -opts.tol) ++neg;
  }
  if (pos < opts.min_samples_per_side || neg < opts.min_samples_per_side)
    throw PreconditionError("insufficient holonomy samples per side");

  auto side = [&](bool positive) {
    int attract = 0, repel = 0, neutral = 0, other = 0;
    // nearest-to-zero behavior, for the "sometimes" flags
    std::vector<std::pair<double, int>> by_dist;  // |x| -> class
    for (const auto& [x, y] : rm.samples) {
      if (positive ? (x <= opts.tol) : (x >= -opts.tol)) continue;
      int cls;
      if (std::abs(y - x) <= opts.tol) {
        cls = 0;
        ++neutral;
      } else if (std::abs(y) < std::abs(x)) {
        cls = 1;
        ++attract;
      } else if (std::abs(y) > std::abs(x)) {
        cls = 2;
        ++repel;
      } else {
        cls = 3;
        ++other;
      }
      by_dist.emplace_back(std::abs(x), cls);
    }
    std::sort(by_dist.begin(), by_dist.end());
    SideBehavior b;
    if (attract + repel + other == 0)
      b = SideBehavior::Trivial;
    else if (repel + other == 0 && neutral == 0)
      b = SideBehavior::Attracting;
    else if (attract + other == 0 && neutral == 0)
      b = SideBehavior::Repelling;
    else
      b = SideBehavior::Mixed;
    bool near_attract = false, near_repel = false;
    for (std::size_t i = 0; i < std::min<std::size_t>(3, by_dist.size()); ++i) {
      near_attract |= by_dist[i].second == 1;
      near_repel |= by_dist[i].second == 2;
    }
    return std::tuple<SideBehavior, bool, bool>(b, near_attract, near_repel);
  };

  auto [pb, pa, pr] = side(true);
  auto [nb, na, nr] = side(false);

  HolonomyClass out;
  out.derivative_at_zero = rm.derivative_at_zero;
  out.linear = std::abs(rm.derivative_at_zero - 1.0) > opts.derivative_margin;
  out.positive_side = pb;
  out.negative_side = nb;
  out.sometimes_attracting = pa && na;
  out.sometimes_repelling = pr && nr;
  out.tol = opts.tol;
  out.derivative_margin = opts.derivative_margin;
  return out;
}

std::string HolonomyClass::label() const {
  if (trivial()) return "trivial";
  if (linear) return attracting() ? "linear-attracting"
                                  : repelling() ? "linear-repelling" : "linear";
  if (attracting()) return "attracting";
  if (repelling()) return "repelling";
  if (sometimes_attracting) return "sometimes-attracting";
  if (sometimes_repelling) return "sometimes-repelling";
  if (one_sided()) return "one-sided";
  return "other";
}

}  // namespace confol
