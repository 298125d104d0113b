#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vvl/errors.hpp"
#include "vvl/grid.hpp"

using namespace vvl;

TEST_CASE("geometric grading: first gap and endpoints") {
  const GridPtr g = build_grid({1.0, 1.0}, 4, 8, 2.0);
  // h (r - 1) / (r^n - 1) with h = 1, r = 2, n = 8
  CHECK(g->x2(1) == doctest::Approx(1.0 / 255.0).epsilon(1e-14));
  CHECK(g->x2(0) == 0.0);
  CHECK(g->x2(8) == 1.0);
  for (int j = 1; j < 8; ++j)
    CHECK((g->x2(j + 1) - g->x2(j)) / (g->x2(j) - g->x2(j - 1)) == doctest::Approx(2.0));
}

TEST_CASE("capped grading never exceeds the cap and fills h") {
  const GridPtr g = build_grid({16.0, 8.0}, 8, 120, 1.06, 0.125);
  for (int j = 0; j < g->n2(); ++j) CHECK(g->x2(j + 1) - g->x2(j) <= 0.125 * (1 + 1e-12));
  CHECK(g->x2(g->n2()) == 8.0);
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(build_grid({-1.0, 1.0}, 8, 8, 1.0), ConfigError);
  CHECK_THROWS_AS(build_grid({1.0, 1.0}, 7, 8, 1.0), ConfigError);
  CHECK_THROWS_AS(build_grid({1.0, 1.0}, 8, 4, 1.0), ConfigError);
  CHECK_THROWS_AS(build_grid({1.0, 1.0}, 8, 8, 0.9), ConfigError);
  CHECK_THROWS_AS(validate(BackgroundFlow{0.0, 0.0}), ConfigError);
}

TEST_CASE("interior first-derivative stencils match the three-point formula") {
  const GridPtr g = build_grid({1.0, 1.0}, 4, 20, 1.15);
  for (int j = 1; j < g->n2(); ++j) {
    const auto ref = oracle::three_point_d1(g->x2(j - 1), g->x2(j), g->x2(j + 1));
    const Stencil& s = g->d1()[j];
    REQUIRE(s.count == 3);
    REQUIRE(s.first == j - 1);
    for (int k = 0; k < 3; ++k) CHECK(s.w[k] == doctest::Approx(ref[k]).epsilon(1e-12));
  }
}

TEST_CASE("all x2 stencils differentiate quadratics exactly") {
  const GridPtr g = build_grid({1.0, 2.0}, 4, 16, 1.2);
  auto apply = [&](const Stencil& s, auto f) {
    double r = 0;
    for (int k = 0; k < s.count; ++k) r += s.w[k] * f(g->x2(s.first + k));
    return r;
  };
  auto q = [](double x) { return 3 * x * x - 2 * x + 1; };
  for (int j = 0; j <= g->n2(); ++j) {
    const double x = g->x2(j);
    CHECK(apply(g->d1()[j], q) == doctest::Approx(6 * x - 2).epsilon(1e-9));
    CHECK(apply(g->d1_up()[j], q) == doctest::Approx(6 * x - 2).epsilon(1e-9));
    CHECK(apply(g->d2()[j], q) == doctest::Approx(6.0).epsilon(1e-8));
  }
}

TEST_CASE("fd_weights reproduces textbook centred weights") {
  const auto w = fd_weights(0.0, {-1.0, 0.0, 1.0}, 2);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(-2.0));
  CHECK(w[2] == doctest::Approx(1.0));
}

TEST_CASE("trapezoid weights integrate linear profiles exactly") {
  const GridPtr g = build_grid({1.0, 3.0}, 4, 17, 1.1);
  double s = 0, m = 0;
  for (int j = 0; j <= g->n2(); ++j) {
    s += g->weights()[j];
    m += g->weights()[j] * (2 * g->x2(j) + 1);
  }
  CHECK(s == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(m == doctest::Approx(9.0 + 3.0).epsilon(1e-13));
}

TEST_CASE("centre-to-node interpolation is exact for linear data") {
  const GridPtr g = build_grid({1.0, 1.0}, 4, 12, 1.3);
  for (int j = 0; j <= g->n2(); ++j) {
    const Stencil& s = g->center_to_node(j);
    const double v = s.w[0] * (5 * g->x2_center(s.first) - 1) +
                     s.w[1] * (5 * g->x2_center(s.first + 1) - 1);
    CHECK(v == doctest::Approx(5 * g->x2(j) - 1).epsilon(1e-12));
  }
}

TEST_CASE("forward transform matches a naive DFT and inverts") {
  // Transforms act on all x2 rows at once.
  const GridPtr g = build_grid({2.0, 1.0}, 12, 8, 1.0);
  const int rows = g->rows(), nm = g->modes();
  std::vector<double> f(12 * rows), back(12 * rows);
  for (int j = 0; j < rows; ++j)
    for (int i = 0; i < 12; ++i) f[j * 12 + i] = std::sin(0.3 + i + j) + 0.25 * i * i / 12.0;
  std::vector<cplx> c(static_cast<std::size_t>(nm) * rows);
  g->forward(f.data(), c.data());
  for (int j = 0; j < rows; ++j) {
    const auto ref = oracle::dft(std::vector<double>(f.begin() + j * 12, f.begin() + j * 12 + 12));
    for (int m = 0; m < nm; ++m) {
      CHECK(std::abs(c[j * nm + m] - ref[m]) < 1e-13);
    }
  }
  g->inverse(c.data(), back.data());
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(back[k] == doctest::Approx(f[k]).epsilon(1e-13));
}

TEST_CASE("layer grids satisfy the resolution rule and refinement doubles n2") {
  for (double nu : {2e-2, 1e-2, 5e-3, 2.5e-3, 1e-4}) {
    const GridPtr g = build_layer_grid({16.0, 8.0}, 32, nu, 4.0);
    const LayerCheck c = check_layer_resolution(*g, nu, 4.0);
    CHECK(c.ok);
    CHECK(c.nodes_in_layer >= 6);
    const GridPtr r = refine_x2(*g);
    CHECK(r->n2() == 2 * g->n2());
    CHECK(r->min_dx2() < g->min_dx2());
  }
  const GridPtr coarse = build_grid({16.0, 8.0}, 32, 32, 1.0);
  CHECK_FALSE(check_layer_resolution(*coarse, 1e-2, 4.0).ok);
}
