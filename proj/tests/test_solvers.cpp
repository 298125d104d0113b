#include <doctest.h>

#include <cmath>

#include "vvl/errors.hpp"
#include "vvl/ns.hpp"
#include "vvl/operators.hpp"
#include "vvl/selftest.hpp"
#include "vvl/vector_calculus.hpp"

using namespace vvl;

namespace {

// psi = sin(2 x1) q(x2) e^{-t}; q, q', q'', q''' supplied per case.
struct Manufactured {
  std::function<std::array<double, 4>(double)> q;
  double nu;
  BackgroundFlow bg{-0.3, 2.0};
  static constexpr double k = 2.0;

  VectorField exact(const GridPtr& g, double t) const {
    const double T = std::exp(-t);
    return {sample(g, [&](double x, double y) { return -std::sin(k * x) * q(y)[1] * T; }),
            sample(g, [&](double x, double y) { return k * std::cos(k * x) * q(y)[0] * T; })};
  }
  VectorField forcing(const GridPtr& g, double t) const {
    const double T = std::exp(-t);
    auto comp = [&](int c) {
      return sample(g, [&, c](double x, double y) {
        const auto Q = q(y);
        const double s = std::sin(k * x), co = std::cos(k * x);
        const double u = -s * Q[1] * T, v = k * co * Q[0] * T;
        if (c == 0) {
          const double ux = -k * co * Q[1] * T, uy = -s * Q[2] * T;
          const double lap = (k * k * s * Q[1] - s * Q[3]) * T;
          return -u + bg.a * ux - bg.U * uy + u * ux + v * uy - nu * lap;
        }
        const double vx = -k * k * s * Q[0] * T, vy = k * co * Q[1] * T;
        const double lap = (-k * k * k * co * Q[0] + k * co * Q[2]) * T;
        return -v + bg.a * vx - bg.U * vy + u * vx + v * vy - nu * lap;
      });
    };
    return {comp(0), comp(1)};
  }
  double error(int n2) const {
    const GridPtr g = build_grid({2 * M_PI, 1.0}, 16, n2, 1.0);
    const Forcing f = [this, g](double t) { return forcing(g, t); };
    const double dt = 1e-3;
    const int steps = 40;
    if (nu > 0) {
      NSSolver s(g, nu, bg, dt, f);
      NSState st = make_ns_state(exact(g, 0), nu, bg, f);
      for (int n = 0; n < steps; ++n) s.step(st);
      return l2_norm(st.v - exact(g, st.t));
    }
    EulerSolver s(g, bg, dt, f);
    EulerState st = make_euler_state(exact(g, 0), bg, f);
    for (int n = 0; n < steps; ++n) s.step(st);
    return l2_norm(st.v_bar - exact(g, st.t));
  }
};

std::array<double, 4> noslip_profile(double y) {
  // y^2 (1 - y)^2
  return {y * y * (1 - y) * (1 - y), 2 * y - 6 * y * y + 4 * y * y * y, 2 - 12 * y + 12 * y * y,
          -12 + 24 * y};
}

std::array<double, 4> slip_profile(double y) {
  // y (1 - y)^2: v1 free at y = 0, zero at y = 1
  return {y * (1 - y) * (1 - y), 1 - 4 * y + 3 * y * y, -4 + 6 * y, 6.0};
}

}  // namespace

TEST_CASE("Navier-Stokes manufactured solution converges at second order") {
  const Manufactured m{noslip_profile, 0.05};
  const double e16 = m.error(16), e32 = m.error(32), e64 = m.error(64);
  CHECK(e16 / e32 == doctest::Approx(4.0).epsilon(0.2));
  CHECK(e32 / e64 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("Euler manufactured solution converges at second order") {
  const Manufactured m{slip_profile, 0.0};
  const double e16 = m.error(16), e32 = m.error(32), e64 = m.error(64);
  CHECK(e16 / e32 == doctest::Approx(4.0).epsilon(0.2));
  CHECK(e32 / e64 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("Stokes decay rate") {
  const StokesDecay d = stokes_decay_study();
  CHECK(d.relative_error <= 0.01);
}

TEST_CASE("solver outputs satisfy the constraints") {
  const GridPtr g = build_layer_grid({16.0, 8.0}, 32, 1e-2, 4.0);
  const VectorField v0 = make_initial_data(g, 0.1, 1, 0.05);
  const BackgroundFlow bg{0.0, 4.0};
  RunParams p;
  p.dt = 2.5e-3;
  p.T = 0.05;
  p.snapshot_stride = 5;
  const auto E = run_euler(v0, bg, p);
  const auto N = run_ns(v0, 1e-2, bg, p);
  REQUIRE(E.size() == 5);
  REQUIRE(N.size() == 5);
  const int top = g->n2();
  for (std::size_t k = 1; k < E.size(); ++k) {
    const double tol = 1e-12 * linf_norm(E[k].v_bar);
    CHECK(linf_norm(divergence(E[k].v_bar)) <= 1e-10 * linf_norm(E[k].v_bar));
    CHECK(linf_norm(divergence(N[k].v)) <= 1e-10 * linf_norm(N[k].v));
    for (int i = 0; i < 32; ++i) {
      CHECK(std::abs(E[k].v_bar.c2(i, 0)) < tol);
      CHECK(std::abs(E[k].v_bar.c2(i, top)) < tol);
      CHECK(std::abs(E[k].v_bar.c1(i, top)) < tol);
      CHECK(E[k].trace[i] == E[k].v_bar.c1(i, 0));
      CHECK(std::abs(N[k].v.c1(i, 0)) < tol);
      CHECK(std::abs(N[k].v.c2(i, 0)) < tol);
      CHECK(std::abs(N[k].v.c1(i, top)) < tol);
      CHECK(std::abs(N[k].v.c2(i, top)) < tol);
    }
  }
  // The outflow trace starts at zero for collar data.
  for (double x : E[0].trace) CHECK(x == 0.0);
}

TEST_CASE("trace time derivative agrees with differenced traces") {
  const GridPtr g = build_layer_grid({16.0, 8.0}, 32, 1e-2, 4.0);
  const VectorField v0 = make_initial_data(g, 0.1, 1, 0.05);
  RunParams p;
  p.dt = 1e-3;
  p.T = 0.3;
  p.snapshot_stride = 1;
  const auto E = run_euler(v0, {0.0, 4.0}, p);
  const std::size_t k = 200;
  double err = 0, scale = 0;
  for (int i = 0; i < 32; ++i) {
    const double fd = (E[k + 1].trace[i] - E[k - 1].trace[i]) / (2 * p.dt);
    err = std::max(err, std::abs(fd - E[k].trace_dt[i]));
    scale = std::max(scale, std::abs(E[k].trace_dt[i]));
  }
  REQUIRE(scale > 0);
  CHECK(err <= 1e-3 * scale);
}

TEST_CASE("zero data stays zero and runs are deterministic") {
  const GridPtr g = build_layer_grid({16.0, 8.0}, 16, 2e-2, 4.0);
  RunParams p;
  p.dt = 5e-3;
  p.T = 0.05;
  const auto z = run_ns(VectorField(g), 2e-2, {0.0, 4.0}, p);
  CHECK(linf_norm(z.back().v) == 0.0);
  const VectorField v0 = make_initial_data(g, 0.1, 1, 0.05);
  const auto a = run_ns(v0, 2e-2, {0.3, 4.0}, p), b = run_ns(v0, 2e-2, {0.3, 4.0}, p);
  CHECK(a.back().v.c1.values() == b.back().v.c1.values());
  CHECK(a.back().v.c2.values() == b.back().v.c2.values());
}

TEST_CASE("time step must divide the horizon") {
  CHECK(step_count(0.5, 2.5e-3) == 200);
  CHECK_THROWS_AS(step_count(0.5, 3e-3), ConfigError);
  CHECK_THROWS_AS(step_count(0.5, 0.0), ConfigError);
}
