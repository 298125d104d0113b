#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vvl/errors.hpp"
#include "vvl/operators.hpp"
#include "vvl/poisson.hpp"
#include "vvl/selftest.hpp"
#include "vvl/vector_calculus.hpp"

using namespace vvl;

TEST_CASE("spectral x1 derivatives are exact for resolved modes") {
  const GridPtr g = build_grid({3.0, 1.0}, 16, 8, 1.0);
  const double k = 2 * M_PI * 3 / 3.0;
  const ScalarField f = sample(g, [k](double x, double y) { return std::sin(k * x) * (1 + y); });
  const ScalarField d = ddx1(f), dd = ddx1x1(f);
  for (int j = 0; j <= g->n2(); ++j)
    for (int i = 0; i < 16; ++i) {
      const double x = g->x1(i), y = g->x2(j);
      CHECK(d(i, j) == doctest::Approx(k * std::cos(k * x) * (1 + y)).scale(1).epsilon(1e-12));
      CHECK(dd(i, j) == doctest::Approx(-k * k * std::sin(k * x) * (1 + y)).scale(1).epsilon(1e-11));
    }
}

TEST_CASE("ddx1 drops the Nyquist mode") {
  const GridPtr g = build_grid({2 * M_PI, 1.0}, 8, 8, 1.0);
  const ScalarField f = sample(g, [](double x, double) { return std::cos(4 * x); });
  CHECK(linf_norm(ddx1(f)) < 1e-13);
}

TEST_CASE("ddx2 converges at second order under refinement") {
  GridPtr g = build_grid({1.0, 1.0}, 4, 16, 1.1);
  double e[3];
  for (int k = 0; k < 3; ++k, g = refine_x2(*g)) {
    const ScalarField f = sample(g, [](double, double y) { return std::exp(y); });
    e[k] = linf_norm(ddx2(f) - f);
  }
  CHECK(e[0] / e[1] == doctest::Approx(4.0).epsilon(0.2));
  CHECK(e[1] / e[2] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("integration and norms against Gauss quadrature") {
  const GridPtr g = build_grid({2.0, 1.0}, 16, 200, 1.0);
  const ScalarField f = sample(g, [](double x, double y) { return 1 + std::cos(M_PI * x) * y + y * y; });
  // int_0^2 int_0^1 (1 + y^2) dy dx; the cosine part integrates to zero
  const double ref = 2.0 * oracle::gauss([](double y) { return 1 + y * y; }, 0, 1);
  CHECK(integrate(f) == doctest::Approx(ref).epsilon(1e-5));
  const ScalarField one(g, 1.0);
  CHECK(l2_norm(one) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("Neumann Poisson: second-order manufactured convergence and zero mean") {
  double e[2];
  for (int k = 0; k < 2; ++k) {
    const GridPtr g = build_grid({2 * M_PI, 1.0}, 8, 24 << k, 1.0);
    auto pex = [](double x, double y) { return std::cos(2 * x) * std::cos(M_PI * y) + std::cos(M_PI * y); };
    const ScalarField rhs = sample(g, [&](double x, double y) {
      return -(4 + M_PI * M_PI) * std::cos(2 * x) * std::cos(M_PI * y) -
             M_PI * M_PI * std::cos(M_PI * y);
    });
    const PoissonResult r = poisson_solve(rhs, PoissonBC{});
    CHECK(std::abs(mean(r.p)) < 1e-13);
    CHECK(r.residual < 1e-10);
    ScalarField ex = sample(g, pex);
    const double mu = mean(ex);
    for (auto& v : ex.values()) v -= mu;
    e[k] = linf_norm(r.p - ex);
  }
  CHECK(e[0] / e[1] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("Neumann Poisson matches the dense bordered solve") {
  const GridPtr g = build_grid({3.0, 1.0}, 8, 12, 1.2);
  const ScalarField rhs =
      sample(g, [](double x, double y) { return std::sin(2 * M_PI * x / 3) * y + 0.3 * y * y - 0.1; });
  PoissonBC bc;
  bc.bottom.assign(8, 0.0);
  bc.top.assign(8, 0.0);
  for (int i = 0; i < 8; ++i) bc.top[i] = 0.02 * std::cos(2 * M_PI * g->x1(i) / 3);
  const ScalarField p = poisson_solve(rhs, bc, 1.0).p;
  const ScalarField ref = dense_neumann_poisson(rhs, bc);
  CHECK(linf_norm(p - ref) <= 1e-10 * linf_norm(ref));
}

TEST_CASE("incompatible Neumann data is rejected") {
  const GridPtr g = build_grid({1.0, 1.0}, 8, 16, 1.0);
  CHECK_THROWS_AS(poisson_solve(ScalarField(g, 1.0), PoissonBC{}), NumericalError);
}

TEST_CASE("Dirichlet Poisson reproduces a quadratic exactly") {
  const GridPtr g = build_grid({1.0, 1.0}, 8, 10, 1.25);
  PoissonBC bc;
  bc.kind = BcKind::Dirichlet;
  bc.bottom.assign(8, 0.0);
  bc.top.assign(8, 1.0);
  const ScalarField p = poisson_solve(ScalarField(g, 2.0), bc).p;
  CHECK(linf_norm(p - sample(g, [](double, double y) { return y * y; })) < 1e-12);
}

TEST_CASE("projection: idempotent, divergence-free, wall conditions") {
  const GridPtr g = build_grid({2 * M_PI, 1.0}, 16, 24, 1.1);
  VectorField v{sample(g, [](double x, double y) { return std::sin(x) * y + y * y; }),
                sample(g, [](double x, double y) { return std::cos(2 * x) * (1 + y); })};
  for (ProjectionBC bc : {ProjectionBC::NoSlip, ProjectionBC::NoPenetration}) {
    const VectorField p1 = leray_project(v, bc);
    const VectorField p2 = leray_project(p1, bc);
    CHECK(l2_norm(p2 - p1) <= 1e-12 * l2_norm(p1));
    CHECK(linf_norm(divergence(p1)) <= 1e-11 * linf_norm(p1));
    for (int i = 0; i < 16; ++i) {
      CHECK(std::abs(p1.c2(i, 0)) < 1e-14);
      CHECK(std::abs(p1.c2(i, 24)) < 1e-14);
      if (bc == ProjectionBC::NoSlip) {
        CHECK(std::abs(p1.c1(i, 0)) < 1e-14);
        CHECK(std::abs(p1.c1(i, 24)) < 1e-14);
      }
    }
  }
}

TEST_CASE("smooth step: plateaus, monotone, derivative consistency") {
  CHECK(smooth_step(-0.5).f == 0.0);
  CHECK(smooth_step(1.5).f == 1.0);
  double prev = 0;
  for (int k = 1; k < 100; ++k) {
    const double t = k / 100.0, d = 1e-5;
    const Jet j = smooth_step(t);
    CHECK(j.f >= prev);
    prev = j.f;
    CHECK(j.d1 == doctest::Approx((smooth_step(t + d).f - smooth_step(t - d).f) / (2 * d)).epsilon(1e-5).scale(1));
    CHECK(j.d2 == doctest::Approx((smooth_step(t + d).d1 - smooth_step(t - d).d1) / (2 * d)).epsilon(1e-4).scale(1));
  }
}

TEST_CASE("collar initial data") {
  const GridPtr g = build_grid({16.0, 8.0}, 32, 400, 1.0);
  const VectorField v = make_initial_data(g, 0.1, 1, 0.05);
  for (int j = 0; j <= g->n2(); ++j) {
    const double y = g->x2(j);
    if (y <= 0.05 || y >= 8 - 0.05)
      for (int i = 0; i < 32; ++i) {
        CHECK(v.c1(i, j) == 0.0);
        CHECK(v.c2(i, j) == 0.0);
      }
  }
  // Analytic divergence is zero; the discrete one is small.
  CHECK(linf_norm(divergence(v)) < 1e-3 * linf_norm(v));
  CHECK(linf_norm(make_initial_data(g, 0.0, 1, 0.05)) == 0.0);
  CHECK_THROWS_AS(make_initial_data(g, 0.1, 1, 5.0), ConfigError);
}

TEST_CASE("boundary traces read the wall rows") {
  const GridPtr g = build_grid({1.0, 1.0}, 8, 8, 1.0);
  const VectorField v{sample(g, [](double x, double y) { return x + 10 * y; }), ScalarField(g)};
  const auto b = boundary_trace(v, Wall::Outflow, 1), t = boundary_trace(v, Wall::Inflow, 1);
  for (int i = 0; i < 8; ++i) {
    CHECK(b.values[i] == doctest::Approx(g->x1(i)));
    CHECK(t.values[i] == doctest::Approx(g->x1(i) + 10));
  }
  CHECK_THROWS_AS(boundary_trace(v, Wall::Outflow, 3), ConfigError);
}
