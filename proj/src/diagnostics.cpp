#include "vvl/diagnostics.hpp"

#include <algorithm>
#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>
#include <limits>

#include "vvl/errors.hpp"

namespace vvl {

const std::array<std::string, kBudgetTerms> kBudgetTermNames = {
    "visc_cross", "visc_euler", "visc_bg",      "transport",        "stretch",
    "nonlinear",  "corrector_dt", "corrector_adv", "corrector_stretch"};

CorrectedDifference corrected_difference(const VectorField& v, const VectorField& v_bar,
                                         const VectorField& z) {
  require_same_grid(v.c1, v_bar.c1, "corrected_difference");
  require_same_grid(v.c1, z.c1, "corrected_difference");
  CorrectedDifference d;
  d.w_tilde = v - v_bar;
  d.w = d.w_tilde - z;
  return d;
}

ScalarField ddx2_sbp(const ScalarField& f) {
  const auto& g = f.grid();
  const int n = g.n2(), n1 = g.n1();
  ScalarField out(f.grid_ptr());
  for (int j = 0; j <= n; ++j) {
    const int lo = std::max(j - 1, 0), hi = std::min(j + 1, n);
    const double inv = 1.0 / (g.x2(hi) - g.x2(lo));
    for (int i = 0; i < n1; ++i) out(i, j) = (f(i, hi) - f(i, lo)) * inv;
  }
  return out;
}

Gradient sbp_gradient(const VectorField& v) {
  Gradient G;
  for (int c = 0; c < 2; ++c) {
    G.g[c][0] = ddx1(v[c]);
    G.g[c][1] = ddx2_sbp(v[c]);
  }
  return G;
}

namespace {

// (a . grad) b given grad b.
VectorField directional(const VectorField& a, const Gradient& gb) {
  VectorField r;
  for (int c = 0; c < 2; ++c) r[c] = a.c1 * gb.g[c][0] + a.c2 * gb.g[c][1];
  return r;
}

// (d . grad) b for a constant direction d = (d1, d2).
VectorField along(double d1, double d2, const Gradient& gb) {
  VectorField r;
  for (int c = 0; c < 2; ++c) r[c] = d1 * gb.g[c][0] + d2 * gb.g[c][1];
  return r;
}

double sq(double x) { return x * x; }

}  // namespace

EnergyBudget energy_budget(const PairedSnapshot& prev, const PairedSnapshot& cur,
                           const PairedSnapshot& next, const CorrectorFields& corrector,
                           const BackgroundFlow& background, double nu,
                           const BudgetOptions& options) {
  const double dt0 = cur.t - prev.t, dt1 = next.t - cur.t;
  if (!(dt0 > 0) || std::abs(dt1 - dt0) > 1e-9 * dt0)
    throw ConfigError("energy_budget: snapshots must be uniformly spaced in time");
  require_same_grid(cur.v.c1, corrector.z.c1, "energy_budget");

  const double a = background.a, U = background.U;
  const VectorField wp = corrected_difference(prev.v, prev.v_bar, prev.z).w;
  const VectorField wn = corrected_difference(next.v, next.v_bar, next.z).w;
  const CorrectedDifference d = corrected_difference(cur.v, cur.v_bar, cur.z);
  const VectorField& w = d.w;
  const VectorField& vb = cur.v_bar;
  const VectorField& z = cur.z;

  EnergyBudget b;
  b.t = cur.t;
  const Gradient gw = sbp_gradient(w);
  const Gradient& gz = corrector.grad_z;
  b.lhs_dwdt = (sq(l2_norm(wn)) - sq(l2_norm(wp))) / (4.0 * dt0);
  b.lhs_visc = nu * inner(gw, gw);

  auto& T = b.terms;
  T[kViscCross] = -nu * inner(gz, gw);
  T[kViscEuler] = nu * inner(laplacian(vb), w);
  T[kViscBg] = 0.0;  // Lap U = 0 for constant U
  T[kTransport] = -inner(along(a, -U, gw), w);
  T[kStretch] = 0.0;  // grad U = 0

  const Gradient gv = sbp_gradient(cur.v), gvb = sbp_gradient(vb), gzd = sbp_gradient(z);
  T[kNonlinear] = -inner(directional(cur.v, gv) - directional(vb, gvb), w);
  VectorField split = directional(cur.v, gw) + directional(w, gvb) + directional(z, gvb) +
                      directional(w, gzd) + directional(vb, gzd) + directional(z, gzd);
  b.nonlinear_split = -inner(split, w);
  b.nonlinear_scale = std::abs(inner(directional(cur.v, gv), w)) +
                      std::abs(inner(directional(vb, gvb), w));
  b.nl1 = inner(directional(cur.v, gw), w);

  T[kCorrectorDt] = -inner(corrector.dz_dt, w);
  // Grid-differenced z here so that (U . grad z, w) = -(z, U . grad w) holds
  // discretely and I can be checked against its single-product form.
  T[kCorrectorAdv] = -inner(along(a, -U, gzd), w);
  T[kCorrectorStretch] = 0.0;  // grad U = 0

  if (options.mutate_term >= 0 && options.mutate_term < kBudgetTerms)
    T[options.mutate_term] = -T[options.mutate_term];

  b.I_combined = T[kViscCross] + T[kCorrectorAdv];
  // (z (x) U, grad w) = (z, U . grad w)
  b.I_direct = -(nu * inner(gz, gw) - inner(z, along(a, -U, gw)));

  double sum = 0, abs_sum = 0;
  for (double x : T) {
    sum += x;
    abs_sum += std::abs(x);
  }
  b.residual = std::abs(b.lhs_dwdt + b.lhs_visc - sum);
  b.dominant = std::max(std::abs(b.lhs_dwdt) + b.lhs_visc, abs_sum);

  b.w_norm = l2_norm(w);
  b.grad_w_norm = std::sqrt(inner(gw, gw));
  b.z_norm = l2_norm(z);
  b.w_tilde_norm = l2_norm(d.w_tilde);
  b.nl1_scale = linf_norm(cur.v) * b.grad_w_norm * b.w_norm;
  b.transport_scale = std::hypot(a, U) * b.grad_w_norm * b.w_norm;

  b.I_scale = (nu * std::sqrt(inner(gz, gz)) + std::hypot(a, U) * b.z_norm) * b.grad_w_norm;
  const double d1w1 = l2_norm(gw.g[0][0]);
  b.drift_z_scale = std::abs(a) * l2_norm(z.c1) * d1w1;
  b.drift_zt_scale = std::abs(a) * l2_norm(corrector.z_tilde.c1) * d1w1;

  b.drift_z_lhs = inner(a * z.c1, gw.g[0][0]);
  b.drift_z_rhs = -a * inner(gz.g[0][0], w.c1);
  b.drift_zt_lhs = inner(a * corrector.z_tilde.c1, gw.g[0][0]);
  b.drift_zt_rhs = -a * inner(corrector.grad_z_tilde.g[0][0], w.c1);

  b.hardy_term = inner(w.c2 * gz.g[0][1], w.c1);
  const auto& g = w.grid();
  double weight = 0;
  for (int j = 0; j <= g.n2(); ++j)
    for (int i = 0; i < g.n1(); ++i)
      weight = std::max(weight, sq(g.x2(j)) * std::abs(gz.g[0][1](i, j)));
  b.hardy_bound = sq(kHardyConstant) * weight * sq(b.grad_w_norm);
  return b;
}

double hardy_ratio(const ScalarField& f) {
  const auto& g = f.grid();
  const double scale = linf_norm(f);
  if (scale == 0) return 0.0;
  for (int i = 0; i < g.n1(); ++i)
    if (std::abs(f(i, 0)) > 1e-12 * scale)
      throw ConfigError("hardy_ratio: f must vanish on x2 = 0");
  ScalarField q(f.grid_ptr());
  for (int j = 0; j <= g.n2(); ++j) {
    const int jj = std::max(j, 1);
    for (int i = 0; i < g.n1(); ++i) q(i, j) = f(i, jj) / g.x2(jj);
  }
  const ScalarField f1 = ddx1(f), f2 = ddx2(f);
  const double grad = std::sqrt(inner(f1, f1) + inner(f2, f2));
  if (grad == 0) return 0.0;
  return l2_norm(q) / grad;
}

ErrorSeries vv_error_series(const std::vector<NSSnapshot>& ns,
                            const std::vector<EulerSnapshot>& euler) {
  if (ns.size() != euler.size())
    throw ConfigError("vv_error_series: runs have different snapshot counts");
  ErrorSeries s;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    if (std::abs(ns[k].t - euler[k].t) > 1e-12 * std::max(1.0, std::abs(ns[k].t)))
      throw ConfigError("vv_error_series: snapshot times are misaligned");
    const double e = l2_norm(ns[k].v - euler[k].v_bar);
    s.points.emplace_back(ns[k].t, e);
    s.sup = std::max(s.sup, e);
  }
  return s;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw ConfigError("fit_rate: need at least 3 points");
  RateFit f;
  double sx = 0, sy = 0;
  std::vector<double> x, y;
  for (const auto& [nu, err] : pairs) {
    if (!(nu > 0) || !(err > 0)) throw ConfigError("fit_rate: values must be positive");
    f.nus.push_back(nu);
    f.errors.push_back(err);
    x.push_back(std::log(nu));
    y.push_back(std::log(err));
    sx += x.back();
    sy += y.back();
  }
  const double n = static_cast<double>(x.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0) throw ConfigError("fit_rate: viscosities must not all coincide");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t k = 0; k < x.size(); ++k) ss_res += sq(y[k] - f.intercept - f.slope * x[k]);
  f.r_squared = (syy > 0) ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k)
    f.pair_slopes.push_back((y[k + 1] - y[k]) / (x[k + 1] - x[k]));
  return f;
}

GronwallFit gronwall_envelope(const std::vector<std::pair<double, double>>& series, double nu) {
  if (!(nu > 0)) throw ConfigError("gronwall_envelope: nu must be positive");
  GronwallFit fit;
  for (const auto& [t, w] : series) {
    if (w == 0) continue;
    if (!(t > 0)) {
      fit.C = std::numeric_limits<double>::infinity();
      fit.binding_t = t;
      continue;
    }
    // C e^{C t / 2} = rho  <=>  C = (2 / t) W0(rho t / 2)
    const double rho = w / std::sqrt(nu * t);
    const double c = 2.0 / t * boost::math::lambert_w0(0.5 * rho * t);
    if (c > fit.C) {
      fit.C = c;
      fit.binding_t = t;
    }
  }
  if (fit.C > 0 && std::isfinite(fit.C)) {
    for (const auto& [t, w] : series)
      if (t > 0)
        fit.max_ratio = std::max(
            fit.max_ratio, w / (fit.C * std::sqrt(nu * t) * std::exp(0.5 * fit.C * t)));
  }
  return fit;
}

}  // namespace vvl
