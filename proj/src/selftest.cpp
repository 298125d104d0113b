#include "vvl/selftest.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "vvl/compat.hpp"
#include "vvl/corrector.hpp"
#include "vvl/diagnostics.hpp"
#include "vvl/errors.hpp"
#include "vvl/harness.hpp"
#include "vvl/ns.hpp"
#include "vvl/operators.hpp"
#include "vvl/vector_calculus.hpp"

namespace vvl {

bool SelftestReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

namespace {

// Polynomial wall-normal profile q with derivatives up to third order.
struct Profile {
  double q, q1, q2, q3;
};
using ProfileFn = Profile (*)(double x, double h);

Profile ns_profile(double x, double h) {
  // x^2 (h - x)^2
  return {x * x * (h - x) * (h - x), 2 * h * h * x - 6 * h * x * x + 4 * x * x * x,
          2 * h * h - 12 * h * x + 12 * x * x, -12 * h + 24 * x};
}

Profile euler_profile(double x, double h) {
  // x (h - x)^2
  return {x * (h - x) * (h - x), h * h - 4 * h * x + 3 * x * x, -4 * h + 6 * x, 6.0};
}

struct Mms {
  ProfileFn q;
  double nu;
  BackgroundFlow bg;
  // Amplitude T(t) = 1 + t.
  static double amp(double t) { return 1.0 + t; }

  VectorField velocity(const GridPtr& g, double t) const {
    const double h = g->h(), T = amp(t);
    auto v1 = [&](double x1, double x2) { return -std::sin(x1) * q(x2, h).q1 * T; };
    auto v2 = [&](double x1, double x2) { return std::cos(x1) * q(x2, h).q * T; };
    return {sample(g, v1), sample(g, v2)};
  }

  // f = dt v + a d1 v - U d2 v + v . grad v - nu Lap v with zero pressure.
  VectorField forcing(const GridPtr& g, double t) const {
    const double h = g->h(), T = amp(t), a = bg.a, U = bg.U, n = nu;
    const ProfileFn qf = q;
    auto f = [=](int comp) {
      return [=](double x1, double x2) {
        const Profile p = qf(x2, h);
        const double s = std::sin(x1), c = std::cos(x1);
        const double v1 = -s * p.q1 * T, v2 = c * p.q * T;
        const double d11 = -c * p.q1 * T, d21 = -s * p.q2 * T;  // d1 v1, d2 v1
        const double d12 = -s * p.q * T, d22 = c * p.q1 * T;    // d1 v2, d2 v2
        if (comp == 0) {
          const double lap = (s * p.q1 - s * p.q3) * T;
          return -s * p.q1 + a * d11 - U * d21 + v1 * d11 + v2 * d21 - n * lap;
        }
        const double lap = (-c * p.q + c * p.q2) * T;
        return c * p.q + a * d12 - U * d22 + v1 * d12 + v2 * d22 - n * lap;
      };
    };
    return {sample(g, f(0)), sample(g, f(1))};
  }
};

MmsStudy mms_study(ProfileFn q, double nu) {
  const Mms mms{q, nu, BackgroundFlow{0.5, 1.0}};
  const double dt = 1e-3, T = 0.05;
  MmsStudy s;
  for (int n2 : {16, 32, 64}) {
    const GridPtr g = build_grid({2 * M_PI, 1.0}, 16, n2, 1.0);
    const Forcing f = [&mms, g](double t) { return mms.forcing(g, t); };
    VectorField v = mms.velocity(g, 0.0);
    const int steps = step_count(T, dt);
    double t = 0;
    if (nu > 0) {
      NSSolver solver(g, nu, mms.bg, dt, f);
      NSState st = make_ns_state(v, nu, mms.bg, f);
      for (int k = 0; k < steps; ++k) solver.step(st);
      v = st.v;
      t = st.t;
    } else {
      EulerSolver solver(g, mms.bg, dt, f);
      EulerState st = make_euler_state(v, mms.bg, f);
      for (int k = 0; k < steps; ++k) solver.step(st);
      v = st.v_bar;
      t = st.t;
    }
    s.n2.push_back(n2);
    s.errors.push_back(l2_norm(v - mms.velocity(g, t)));
  }
  for (std::size_t k = 0; k + 1 < s.errors.size(); ++k)
    s.ratios.push_back(s.errors[k] / s.errors[k + 1]);
  return s;
}

SelftestCheck check(std::string name, bool ok, double value, double tol, std::string detail = {}) {
  return {std::move(name), ok, value, tol, std::move(detail)};
}

std::string ratios_text(const MmsStudy& m) {
  std::string s;
  for (double r : m.ratios) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.3f", s.empty() ? "" : " ", r);
    s += buf;
  }
  return "ratios " + s;
}

double worst_ratio_deviation(const MmsStudy& m) {
  double d = 0;
  for (double r : m.ratios) d = std::max(d, std::abs(r - 4.0) / 4.0);
  return d;
}

}  // namespace

MmsStudy ns_mms_study() { return mms_study(ns_profile, 0.1); }
MmsStudy euler_mms_study() { return mms_study(euler_profile, 0.0); }

StokesDecay stokes_decay_study() {
  const double h = 1.0, nu = 0.1, dt = 5e-3, T = 0.5;
  const GridPtr g = build_grid({2 * M_PI, h}, 8, 64, 1.0);
  const BackgroundFlow bg{0.0, 1.0};
  SolverOptions opts;
  opts.nonlinear = false;
  opts.transport = false;
  VectorField v{sample(g, [h](double, double x2) { return std::sin(M_PI * x2 / h); }),
                ScalarField(g)};
  NSSolver solver(g, nu, bg, dt, {}, opts);
  NSState st = make_ns_state(v, nu, bg);
  const double n0 = l2_norm(st.v);
  for (int k = 0, n = step_count(T, dt); k < n; ++k) solver.step(st);
  StokesDecay d;
  d.measured_rate = -std::log(l2_norm(st.v) / n0) / st.t;
  d.exact_rate = nu * M_PI * M_PI / (h * h);
  d.relative_error = std::abs(d.measured_rate - d.exact_rate) / d.exact_rate;
  return d;
}

ScalarField dense_neumann_poisson(const ScalarField& rhs, const PoissonBC& bc) {
  const auto& g = rhs.grid();
  const int n1 = g.n1(), n = g.n2(), N = n1 * (n + 1);
  const auto& x = g.x2_nodes();
  if (N > 4096) throw ConfigError("dense_neumann_poisson: grid too large");
  auto idx = [n1](int i, int j) { return j * n1 + i; };

  // Second x1 derivative by the explicit trigonometric sum; the Nyquist
  // term enters once as a cosine.
  Eigen::MatrixXd D(n1, n1);
  for (int i = 0; i < n1; ++i)
    for (int l = 0; l < n1; ++l) {
      const double d = g.x1(i) - g.x1(l);
      double s = 0;
      for (int m = 1; m <= n1 / 2; ++m) {
        const double k = 2 * M_PI * m / g.L();
        s -= (m == n1 / 2 ? 1.0 : 2.0) * k * k * std::cos(k * d);
      }
      D(i, l) = s / n1;
    }

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N + 1, N + 1);
  Eigen::VectorXd b(N + 1);
  Eigen::VectorXd w(N);  // quadrature weights; w^T A = 0 for this closure
  for (int j = 0; j <= n; ++j) {
    const double hm = j > 0 ? x[j] - x[j - 1] : 0, hp = j < n ? x[j + 1] - x[j] : 0;
    for (int i = 0; i < n1; ++i) {
      const int r = idx(i, j);
      w(r) = 0.5 * (hm + hp);
      for (int l = 0; l < n1; ++l) A(r, idx(l, j)) += D(i, l);
      b(r) = rhs(i, j);
      if (j == 0) {
        A(r, idx(i, 0)) -= 2.0 / (hp * hp);
        A(r, idx(i, 1)) += 2.0 / (hp * hp);
        b(r) += bc.bottom.empty() ? 0.0 : 2.0 / hp * bc.bottom[i];
      } else if (j == n) {
        A(r, idx(i, n)) -= 2.0 / (hm * hm);
        A(r, idx(i, n - 1)) += 2.0 / (hm * hm);
        b(r) -= bc.top.empty() ? 0.0 : 2.0 / hm * bc.top[i];
      } else {
        const double s = 2.0 / (hm + hp);
        A(r, idx(i, j - 1)) += s / hm;
        A(r, idx(i, j)) -= s / hm + s / hp;
        A(r, idx(i, j + 1)) += s / hp;
      }
    }
  }
  // Remove the incompatible part of the data with a constant source shift,
  // then border with the zero-mean condition.
  const Eigen::VectorXd bb = b.head(N);
  const double shift = w.dot(bb) / w.sum();
  b.head(N).array() -= shift;
  b(N) = 0;
  A.block(N, 0, 1, N) = w.transpose();
  A.block(0, N, N, 1) = w;
  const Eigen::VectorXd sol = A.partialPivLu().solve(b);
  ScalarField p(rhs.grid_ptr());
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i < n1; ++i) p(i, j) = sol(idx(i, j));
  return p;
}

SelftestReport run_selftest() {
  const auto t0 = std::chrono::steady_clock::now();
  SelftestReport rep;
  auto& out = rep.checks;

  {
    const GridPtr g = build_grid({1.0, 1.0}, 4, 8, 2.0);
    const double e = std::abs(g->x2(1) - 1.0 / 255.0);
    out.push_back(check("grid.first_gap_h1_n8_r2", e <= 1e-14, e, 1e-14));
  }
  {
    double err[2];
    GridPtr g = build_grid({2 * M_PI, 1.0}, 8, 16, 1.05);
    for (int k = 0; k < 2; ++k, g = refine_x2(*g)) {
      const ScalarField d = ddx2(sample(g, [](double, double y) { return std::sin(3 * y); }));
      const ScalarField ex = sample(g, [](double, double y) { return 3 * std::cos(3 * y); });
      err[k] = linf_norm(d - ex);
    }
    const double r = err[0] / err[1];
    out.push_back(check("grid.ddx2_second_order", r > 3.2 && r < 4.8, r, 4.0, "error ratio"));
  }
  {
    double err[2];
    for (int k = 0; k < 2; ++k) {
      const GridPtr g = build_grid({2 * M_PI, 1.0}, 8, 16 << k, 1.0);
      auto pex = [](double x1, double x2) { return std::cos(x1) * std::cos(M_PI * x2); };
      const ScalarField rhs = sample(g, [&](double x1, double x2) {
        return -(1 + M_PI * M_PI) * pex(x1, x2);
      });
      PoissonBC bc;
      const ScalarField p = poisson_solve(rhs, bc).p;
      err[k] = linf_norm(p - sample(g, pex));
    }
    const double r = err[0] / err[1];
    out.push_back(check("grid.poisson_second_order", r > 3.2 && r < 4.8, r, 4.0, "error ratio"));
  }
  {
    const GridPtr g = build_grid({2 * M_PI, 1.0}, 16, 24, 1.1);
    VectorField v{sample(g, [](double x1, double x2) { return std::sin(x1) * x2 + x2 * x2; }),
                  sample(g, [](double x1, double x2) { return std::cos(2 * x1) * (1 + x2); })};
    const VectorField p1 = leray_project(v, ProjectionBC::NoSlip);
    const VectorField p2 = leray_project(p1, ProjectionBC::NoSlip);
    const double e = l2_norm(p2 - p1) / l2_norm(p1);
    out.push_back(check("fields.projection_idempotent", e <= 1e-10, e, 1e-10));
    const double dv = linf_norm(divergence(p1)) / linf_norm(p1);
    out.push_back(check("fields.projection_divergence_free", dv <= 1e-10, dv, 1e-10));
  }
  {
    const MmsStudy m = ns_mms_study();
    const double d = worst_ratio_deviation(m);
    out.push_back(check("solver.ns_mms_second_order", d <= 0.2, d, 0.2, ratios_text(m)));
  }
  {
    const MmsStudy m = euler_mms_study();
    const double d = worst_ratio_deviation(m);
    out.push_back(check("solver.euler_mms_second_order", d <= 0.2, d, 0.2, ratios_text(m)));
  }
  {
    const StokesDecay s = stokes_decay_study();
    out.push_back(check("solver.stokes_decay_rate", s.relative_error <= 0.01, s.relative_error,
                        0.01));
  }
  {
    const double nu = 1e-3;
    const BackgroundFlow bg{0.0, 4.0};
    const GridPtr g = build_layer_grid({16, 8}, 32, nu, bg.U, kStudyRule);
    std::vector<double> tr(g->n1()), trd(g->n1());
    for (int i = 0; i < g->n1(); ++i) {
      tr[i] = std::sin(2 * M_PI * g->x1(i) / 16);
      trd[i] = std::cos(2 * M_PI * g->x1(i) / 16);
    }
    const CorrectorFields c = eval_corrector(tr, trd, nu, bg, g);
    const double r = key_cancellation_residual(c) / key_cancellation_scale(c);
    out.push_back(check("corrector.key_cancellation", r <= 1e-12, r, 1e-12));
  }
  {
    // Short resolved pair: budget closes, and flipping one term is caught.
    RunConfig c;
    const double nu = 2e-2;
    c.T_final = 0.1;
    const GridPtr g = grid_for(c, nu);
    const VectorField v0 = make_initial_data(g, c.initial);
    RunParams rp;
    rp.dt = c.dt;
    rp.T = c.T_final;
    rp.snapshot_stride = c.snapshot_stride;
    const auto E = run_euler(v0, c.background, rp);
    const auto N = run_ns(v0, nu, c.background, rp);
    double worst = 0, mutated = 1e300;
    for (std::size_t k = 1; k + 1 < E.size(); ++k) {
      auto snap = [&](std::size_t i, const CorrectorFields& cf) {
        return PairedSnapshot{E[i].t, N[i].v, E[i].v_bar, cf.z};
      };
      const CorrectorFields cp = eval_corrector(E[k - 1].trace, E[k - 1].trace_dt, nu, c.background, g);
      const CorrectorFields cc = eval_corrector(E[k].trace, E[k].trace_dt, nu, c.background, g);
      const CorrectorFields cn = eval_corrector(E[k + 1].trace, E[k + 1].trace_dt, nu, c.background, g);
      const EnergyBudget b =
          energy_budget(snap(k - 1, cp), snap(k, cc), snap(k + 1, cn), cc, c.background, nu);
      BudgetOptions o;
      o.mutate_term = kViscEuler;
      const EnergyBudget m =
          energy_budget(snap(k - 1, cp), snap(k, cc), snap(k + 1, cn), cc, c.background, nu, o);
      worst = std::max(worst, b.residual / b.dominant);
      mutated = std::min(mutated, m.residual / m.dominant);
    }
    out.push_back(check("diagnostics.budget_closure", worst <= 0.05, worst, 0.05));
    out.push_back(check("diagnostics.mutation_detected", mutated > 0.05, mutated, 0.05,
                        "closure with visc_euler negated must fail"));
  }
  {
    const GridPtr g = build_grid({16, 8}, 8, 32, 1.0);
    const BackgroundFlow bg{0.0, 4.0};
    const VectorField u0 = full_initial_velocity(make_initial_data(g, 0.1, 1, 0.05), bg);
    const VectorField F = convective_term(u0);
    PoissonBC bc;
    bc.bottom.resize(g->n1());
    bc.top.resize(g->n1());
    for (int i = 0; i < g->n1(); ++i) {
      bc.bottom[i] = -F.c2(i, 0);
      bc.top[i] = -F.c2(i, g->n2());
    }
    const ScalarField ref = dense_neumann_poisson(-1.0 * (ddx1(F.c1) + ddx2(F.c2)), bc);
    const ScalarField p0 = solve_p0(u0, VectorField{}, bg);
    const double e = linf_norm(p0 - ref) / std::max(linf_norm(ref), 1e-300);
    out.push_back(check("compat.p0_dense_oracle", e <= 1e-8, e, 1e-8));
  }
  {
    const GridPtr coarse = build_grid({16, 8}, 32, 16, 1.06);
    const LayerCheck lc = check_layer_resolution(*coarse, 1e-2, 4.0);
    const GridPtr fine = build_layer_grid({16, 8}, 32, 1e-2, 4.0);
    const LayerCheck lf = check_layer_resolution(*fine, 1e-2, 4.0);
    out.push_back(check("harness.resolution_gate_reports", !lc.ok && lf.ok, lc.min_cell,
                        lc.required_min_cell, "coarse grid flagged, layer grid accepted"));
  }

  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.push_back(check("selftest.runtime_s", rep.seconds < 120, rep.seconds, 120));
  return rep;
}

int cmd_selftest(std::ostream& out, std::ostream& err) {
  try {
    const SelftestReport r = run_selftest();
    for (const auto& c : r.checks) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%-4s %-36s value=%.3e tol=%.3e", c.passed ? "PASS" : "FAIL",
                    c.name.c_str(), c.value, c.tolerance);
      out << buf << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
    }
    out << (r.all_passed() ? "selftest: all checks passed" : "selftest: FAILED") << "\n";
    return r.all_passed() ? kExitOk : kExitNumerical;
  } catch (const ConfigError& e) {
    err << error_json("config", e.what(), kExitConfig) << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << error_json("numerical", e.what(), kExitNumerical) << "\n";
    return kExitNumerical;
  }
}

}  // namespace vvl
