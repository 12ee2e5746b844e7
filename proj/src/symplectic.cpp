#include "confol/symplectic.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace confol {

namespace {

KForm::Index full_index(int dim) {
  KForm::Index idx(dim);
  for (int i = 0; i < dim; ++i) idx[i] = i;
  return idx;
}

double min_on_grid(const ScalarExpr& e, const Grid& grid) {
  double worst = std::numeric_limits<double>::infinity();
  grid.for_each([&](std::span<const double> p) {
    worst = std::min(worst, e.eval_unchecked(p));
  });
  return worst;
}

}  // namespace

FillingCertificate weak_filling_form(const KForm& alpha,
                                     const VectorFieldChart& v,
                                     const KForm& Omega,
                                     std::optional<double> eps,
                                     const SymplecticOptions& opts) {
  const auto& base = alpha.chart();
  if (base->dim() != 3 || alpha.degree() != 1 || Omega.degree() != 3)
    throw PreconditionError("filling form needs a 1-form and a volume form "
                            "on a 3-dimensional chart");
  Grid base_grid(base, opts.grid_n);

  // hypothesis: Omega is a positive volume form
  if (min_on_grid(Omega.coefficient(full_index(3)), base_grid) <
      opts.margins.margin)
    throw PreconditionError(
        "volume-form hypothesis failed: Omega density below margin");

  // hypothesis: v preserves Omega
  KForm tilde = interior_product(v, Omega);
  const double dtilde = max_norm_on_grid(exterior_d(tilde), base_grid);
  if (dtilde > opts.margins.zero_tol)
    throw PreconditionError(
        "volume-preservation hypothesis failed: |d(i_v Omega)| = " +
        std::to_string(dtilde));

  // hypothesis: v is transverse to ker(alpha)
  if (min_on_grid(interior_product(v, alpha).coefficient({}), base_grid) <
      opts.margins.margin)
    throw PreconditionError(
        "transversality hypothesis failed: alpha(v) below margin");

  auto product = product_with_interval(base, "t", {-1, 1});
  Grid product_grid(product, opts.grid_n);
  KForm tilde4 = lift_to_product(tilde, product);
  KForm alpha4 = lift_to_product(alpha, product);
  KForm t_alpha = alpha4.scaled(ScalarExpr::var("t", product));
  KForm d_t_alpha = exterior_d(t_alpha);

  auto certify = [&](double e) {
    FillingCertificate cert;
    cert.margins = opts.margins;
    cert.eps = e;
    cert.omega =
        tilde4 + d_t_alpha.scaled(ScalarExpr::constant_real(e, product));
    cert.d_omega_max =
        max_norm_on_grid(exterior_d(cert.omega), product_grid);
    KForm square = wedge(cert.omega, cert.omega);
    cert.min_square_density =
        min_on_grid(square.coefficient(full_index(4)), product_grid);
    PlaneFieldChart pf(alpha, "boundary");
    for (int side = 0; side < 2; ++side) {
      const double tval = side == 0 ? -1.0 : 1.0;
      KForm restricted =
          pullback(interval_slice(base, product, tval), cert.omega);
      auto report = weak_domination_check(restricted, pf, opts);
      (side == 0 ? cert.boundary_min_bottom : cert.boundary_min_top) =
          report.minimum;
    }
    return cert;
  };

  if (eps) return certify(*eps);
  double e = 1.0;
  for (int attempt = 0; attempt < opts.retries; ++attempt, e /= 2) {
    auto cert = certify(e);
    if (cert.valid()) return cert;
  }
  throw VerificationError("filling-form eps scan exhausted");
}

DilatingReport check_dilating(const VectorFieldChart& v, const KForm& omega,
                              const SymplecticOptions& opts) {
  if (omega.degree() != 2)
    throw PreconditionError("dilating check expects a 2-form");
  Grid grid(omega.chart(), opts.grid_n);
  const double closed = max_norm_on_grid(exterior_d(omega), grid);
  if (closed > opts.margins.zero_tol)
    throw PreconditionError("omega is not closed: |d omega| = " +
                            std::to_string(closed));
  KForm residual_form = exterior_d(interior_product(v, omega)) - omega;
  DilatingReport report;
  report.residual = max_norm_on_grid(residual_form, grid);
  report.dilating = report.residual <= opts.margins.zero_tol * 10;
  return report;
}

BoundaryFormReport induced_boundary_form(const VectorFieldChart& v,
                                         const KForm& omega,
                                         const ChartMap& slice,
                                         const SymplecticOptions& opts,
                                         int identity_samples, unsigned seed) {
  auto dil = check_dilating(v, omega, opts);
  if (!dil.dilating)
    throw PreconditionError("vector field is not dilating for omega "
                            "(residual " +
                            std::to_string(dil.residual) + ")");

  KForm ivo = interior_product(v, omega);
  BoundaryFormReport report{pullback(slice, ivo), {}, 0.0};
  report.classification =
      classify(PlaneFieldChart(report.alpha, "induced"), opts.grid_n,
               opts.margins);

  // (i_v w) ^ w = 1/2 i_v (w ^ w), sampled at random chart points
  KForm lhs = wedge(ivo, omega);
  KForm rhs = interior_product(v, wedge(omega, omega))
                  .scaled(ScalarExpr::constant(Rational(1, 2), omega.chart()));
  KForm diff = lhs - rhs;
  std::mt19937_64 rng(seed);
  const auto& chart = omega.chart();
  std::vector<double> p(chart->dim());
  for (int s = 0; s < identity_samples; ++s) {
    for (int i = 0; i < chart->dim(); ++i) {
      const auto& iv = chart->interval(i);
      p[i] = std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng);
    }
    for (const auto& [idx, c] : diff.coefficients())
      report.identity_residual =
          std::max(report.identity_residual, std::abs(c.eval_unchecked(p)));
  }
  return report;
}

std::pair<std::vector<double>, std::vector<double>> kernel_basis(
    const std::vector<double>& a, double zero_tol) {
  if (a.size() != 3) throw Error("kernel basis works on 3-charts");
  const double norm2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
  if (norm2 <= zero_tol * zero_tol)
    throw PreconditionError("basis construction failure where alpha vanishes");
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(a[i]) > std::abs(a[k])) k = i;
  const int i = k == 0 ? 1 : 0;
  const int j = k == 2 ? 1 : 2;

  auto project = [&](int axis) {
    std::vector<double> e(3, 0.0);
    e[axis] = 1.0;
    for (int t = 0; t < 3; ++t) e[t] -= a[axis] * a[t] / norm2;
    return e;
  };
  auto normalize = [](std::vector<double>& x) {
    const double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    for (auto& c : x) c /= n;
  };
  std::vector<double> u = project(i), w = project(j);
  normalize(u);
  double dot = u[0] * w[0] + u[1] * w[1] + u[2] * w[2];
  for (int t = 0; t < 3; ++t) w[t] -= dot * u[t];
  normalize(w);

  // orient so that (u, w, alpha-positive direction) is positive
  const double det = u[0] * (w[1] * a[2] - w[2] * a[1]) -
                     u[1] * (w[0] * a[2] - w[2] * a[0]) +
                     u[2] * (w[0] * a[1] - w[1] * a[0]);
  if (det < 0) std::swap(u, w);
  return {u, w};
}

DominationReport weak_domination_check(const KForm& omega,
                                       const PlaneFieldChart& pf,
                                       const SymplecticOptions& opts) {
  if (omega.degree() != 2)
    throw PreconditionError("domination check expects a 2-form");
  if (!omega.chart()->same_as(*pf.chart()))
    throw Error("domination check: chart mismatch");

  std::vector<std::pair<KForm::Index, ScalarExpr>> coefs(
      pf.form.coefficients().begin(), pf.form.coefficients().end());

  DominationReport report;
  report.minimum = std::numeric_limits<double>::infinity();
  Grid grid(pf.chart(), opts.grid_n);
  grid.for_each([&](std::span<const double> p) {
    std::vector<double> a(3, 0.0);
    for (const auto& [idx, c] : coefs) a[idx[0]] = c.eval_unchecked(p);
    auto [u, w] = kernel_basis(a, opts.margins.zero_tol);
    report.minimum = std::min(report.minimum, omega.apply(p, {u, w}));
  });
  report.dominates = report.minimum >= opts.margins.margin;
  return report;
}

}  // namespace confol
