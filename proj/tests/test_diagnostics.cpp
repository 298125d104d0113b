#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vvl/diagnostics.hpp"
#include "vvl/errors.hpp"
#include "vvl/operators.hpp"
#include "vvl/vector_calculus.hpp"

using namespace vvl;

TEST_CASE("corrected difference") {
  const GridPtr g = build_grid({1.0, 1.0}, 8, 8, 1.0);
  const VectorField v{sample(g, [](double x, double y) { return x + y; }), ScalarField(g, 1.0)};
  const VectorField vb{ScalarField(g, 0.5), ScalarField(g, 2.0)};
  const VectorField z{ScalarField(g, 0.25), ScalarField(g, -1.0)};
  const auto d = corrected_difference(v, vb, z);
  CHECK(linf_norm(d.w_tilde - (v - vb)) == 0.0);
  CHECK(linf_norm(d.w - (v - vb - z)) == 0.0);
  CHECK(linf_norm(corrected_difference(v, v, VectorField(g)).w) == 0.0);
  const GridPtr other = build_grid({1.0, 1.0}, 8, 9, 1.0);
  CHECK_THROWS(corrected_difference(v, VectorField(other), z));
}

TEST_CASE("SBP x2 derivative: discrete integration by parts is exact") {
  const GridPtr g = build_grid({1.0, 2.0}, 4, 23, 1.12);
  const ScalarField f = sample(g, [](double x, double y) { return std::sin(3 * y + x) + y * y; });
  const ScalarField h = sample(g, [](double x, double y) { return std::exp(-y) * (2 + std::cos(x)); });
  const ScalarField lhs = f * ddx2_sbp(h) + h * ddx2_sbp(f);
  const int n = g->n2();
  for (int i = 0; i < 4; ++i) {
    double s = 0;
    for (int j = 0; j <= n; ++j) s += g->weights()[j] * lhs(i, j);
    CHECK(s == doctest::Approx(f(i, n) * h(i, n) - f(i, 0) * h(i, 0)).epsilon(1e-13));
  }
}

TEST_CASE("fit_rate on constructed data") {
  std::vector<std::pair<double, double>> half, lin;
  for (double nu : {2e-2, 1e-2, 5e-3, 2.5e-3}) {
    half.emplace_back(nu, std::sqrt(nu));
    lin.emplace_back(nu, 3 * nu);
  }
  const RateFit a = fit_rate(half);
  CHECK(a.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.pair_slopes.size() == 3);
  CHECK(fit_rate(lin).slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::exp(fit_rate(lin).intercept) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK_THROWS_AS(fit_rate({{1e-2, 1.0}, {1e-3, 0.5}}), ConfigError);
  CHECK_THROWS_AS(fit_rate({{1e-2, 1.0}, {1e-3, 0.0}, {1e-4, 0.1}}), ConfigError);
}

TEST_CASE("fit_rate agrees with an independent least-squares slope") {
  const std::vector<double> x{0.02, 0.01, 0.005, 0.0025}, y{0.011, 0.0074, 0.0051, 0.0036};
  std::vector<std::pair<double, double>> p;
  for (std::size_t k = 0; k < x.size(); ++k) p.emplace_back(x[k], y[k]);
  const RateFit f = fit_rate(p);
  CHECK(f.slope == doctest::Approx(oracle::loglog_slope(x, y)).epsilon(1e-12));
  CHECK(f.r_squared >= 0.0);
  CHECK(f.r_squared <= 1.0);
}

TEST_CASE("Groenwall envelope") {
  CHECK(gronwall_envelope({{0.0, 0.0}, {0.1, 0.0}}, 1e-2).C == 0.0);
  const double nu = 1e-2;
  std::vector<std::pair<double, double>> s;
  for (int k = 0; k <= 50; ++k) {
    const double t = 0.01 * k;
    s.emplace_back(t, std::sqrt(nu * t));
  }
  const GronwallFit f = gronwall_envelope(s, nu);
  CHECK(f.C <= 1.0);
  CHECK(f.C == doctest::Approx(oracle::gronwall_scan(s, nu)).epsilon(1e-9));
  CHECK(f.max_ratio == doctest::Approx(1.0).epsilon(1e-9));
  std::vector<std::pair<double, double>> wiggly;
  for (int k = 1; k <= 40; ++k) {
    const double t = 0.0125 * k;
    wiggly.emplace_back(t, 1e-3 * t * (1.5 + std::sin(17 * t)));
  }
  CHECK(gronwall_envelope(wiggly, 5e-3).C ==
        doctest::Approx(oracle::gronwall_scan(wiggly, 5e-3)).epsilon(1e-9));
}

TEST_CASE("Hardy ratio") {
  const GridPtr g = build_grid({2.0, 1.0}, 16, 400, 1.0);
  const ScalarField s = sample(g, [](double, double y) { return std::sin(M_PI * y); });
  CHECK(hardy_ratio(s) <= 2.0);
  // f = x2 cos(pi x1): ||cos|| / ||grad(x2 cos)|| with ||x2 d1 cos||^2 + ||cos||^2.
  const ScalarField f = sample(g, [](double x, double y) { return y * std::cos(M_PI * x); });
  const double c2 = oracle::gauss([](double x) { return std::pow(std::cos(M_PI * x), 2); }, 0, 2);
  const double s2 = oracle::gauss([](double x) { return std::pow(M_PI * std::sin(M_PI * x), 2); }, 0, 2);
  const double ref = std::sqrt(c2 / (c2 + s2 / 3.0));
  CHECK(hardy_ratio(f) == doctest::Approx(ref).epsilon(1e-4));
  CHECK(hardy_ratio(ScalarField(g)) == 0.0);
  CHECK_THROWS_AS(hardy_ratio(ScalarField(g, 1.0)), ConfigError);
}

TEST_CASE("error series: alignment and matched data") {
  const GridPtr g = build_grid({1.0, 1.0}, 8, 8, 1.0);
  const VectorField v{ScalarField(g, 1.0), ScalarField(g)};
  std::vector<NSSnapshot> ns{{0.0, v}, {0.1, v}};
  std::vector<EulerSnapshot> eu{{0.0, v, {}, {}}, {0.1, v, {}, {}}};
  const ErrorSeries s = vv_error_series(ns, eu);
  CHECK(s.sup == 0.0);
  eu[1].t = 0.2;
  CHECK_THROWS_AS(vv_error_series(ns, eu), ConfigError);
  eu.pop_back();
  CHECK_THROWS_AS(vv_error_series(ns, eu), ConfigError);
}

namespace {

struct Pair {
  GridPtr g;
  std::vector<PairedSnapshot> snaps;
  std::vector<CorrectorFields> corr;
  BackgroundFlow bg;
  double nu;
};

Pair short_pair(double nu, double a, double T = 0.1) {
  Pair p;
  p.nu = nu;
  p.bg = {a, 4.0};
  p.g = build_layer_grid({16.0, 8.0}, 32, nu, 4.0);
  const VectorField v0 = make_initial_data(p.g, 0.1, 1, 0.05);
  RunParams rp;
  rp.dt = 2.5e-3;
  rp.T = T;
  rp.snapshot_stride = 4;
  const auto E = run_euler(v0, p.bg, rp);
  const auto N = run_ns(v0, nu, p.bg, rp);
  for (std::size_t k = 0; k < E.size(); ++k) {
    p.corr.push_back(eval_corrector(E[k].trace, E[k].trace_dt, nu, p.bg, p.g));
    p.snaps.push_back({E[k].t, N[k].v, E[k].v_bar, p.corr.back().z});
  }
  return p;
}

}  // namespace

TEST_CASE("budget identities on a short resolved run") {
  const Pair p = short_pair(1e-2, 0.0);
  for (std::size_t k = 1; k + 1 < p.snaps.size(); ++k) {
    const EnergyBudget b = energy_budget(p.snaps[k - 1], p.snaps[k], p.snaps[k + 1], p.corr[k], p.bg, p.nu);
    CHECK(b.residual <= 0.05 * b.dominant);
    CHECK(std::abs(b.terms[kTransport]) <= 1e-8 * b.transport_scale);
    CHECK(std::abs(b.terms[kNonlinear] - b.nonlinear_split) <= 1e-10 * b.nonlinear_scale);
    CHECK(std::abs(b.I_combined - b.I_direct) <= 1e-8 * b.I_scale);
    CHECK(b.terms[kViscBg] == 0.0);
    CHECK(b.terms[kStretch] == 0.0);
    CHECK(b.terms[kCorrectorStretch] == 0.0);
    CHECK(std::abs(b.hardy_term) <= b.hardy_bound);
    // w vanishes on the walls.
    const VectorField w = corrected_difference(p.snaps[k].v, p.snaps[k].v_bar, p.snaps[k].z).w;
    for (int i = 0; i < 32; ++i) {
      CHECK(std::abs(w.c1(i, 0)) <= 1e-8 * linf_norm(w));
      CHECK(std::abs(w.c2(i, 0)) <= 1e-8 * linf_norm(w));
    }
  }
}

TEST_CASE("tangential drift: periodic integration by parts") {
  const Pair p = short_pair(1e-2, 1.0, 0.05);
  for (std::size_t k = 1; k + 1 < p.snaps.size(); ++k) {
    const EnergyBudget b = energy_budget(p.snaps[k - 1], p.snaps[k], p.snaps[k + 1], p.corr[k], p.bg, p.nu);
    CHECK(std::abs(b.drift_z_lhs - b.drift_z_rhs) <= 1e-8 * b.drift_z_scale);
    CHECK(std::abs(b.drift_zt_lhs - b.drift_zt_rhs) <= 1e-8 * b.drift_zt_scale);
    CHECK(b.residual <= 0.05 * b.dominant);
  }
}

TEST_CASE("budget: zero difference, spacing check, mutation") {
  Pair p = short_pair(2e-2, 0.0, 0.05);
  // v = vbar + z exactly gives w = 0.
  std::vector<PairedSnapshot> s = p.snaps;
  for (auto& x : s) x.v = x.v_bar + x.z;
  const EnergyBudget zero = energy_budget(s[0], s[1], s[2], p.corr[1], p.bg, p.nu);
  // w is zero up to the round-off of (vbar + z) - vbar - z.
  for (double t : zero.terms) CHECK(std::abs(t) < 1e-18);
  CHECK(zero.residual < 1e-18);
  CHECK(zero.w_norm < 1e-15);

  std::vector<PairedSnapshot> bad = p.snaps;
  bad[2].t += 1e-3;
  CHECK_THROWS_AS(energy_budget(bad[0], bad[1], bad[2], p.corr[1], p.bg, p.nu), ConfigError);

  BudgetOptions o;
  o.mutate_term = kViscEuler;
  const EnergyBudget ok = energy_budget(p.snaps[1], p.snaps[2], p.snaps[3], p.corr[2], p.bg, p.nu);
  const EnergyBudget m = energy_budget(p.snaps[1], p.snaps[2], p.snaps[3], p.corr[2], p.bg, p.nu, o);
  CHECK(ok.residual <= 0.05 * ok.dominant);
  CHECK(m.residual > 0.05 * m.dominant);
}
