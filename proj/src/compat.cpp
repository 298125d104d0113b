#include "vvl/compat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vvl/errors.hpp"
#include "vvl/operators.hpp"
#include "vvl/vector_calculus.hpp"

namespace vvl {

VectorField convective_term(const VectorField& u0) {
  VectorField r;
  for (int c = 0; c < 2; ++c) r[c] = u0.c1 * ddx1(u0[c]) + u0.c2 * ddx2(u0[c]);
  return r;
}

ScalarField solve_p0(const VectorField& u0, const VectorField& f0,
                     const BackgroundFlow& background, PoissonResult* details) {
  validate(background);
  if (f0.c1.grid_ptr()) require_same_grid(u0.c1, f0.c1, "solve_p0");
  const auto& g = u0.grid();
  const VectorField F = convective_term(u0);
  const ScalarField rhs = -1.0 * (ddx1(F.c1) + ddx2(F.c2));

  // n = (0, -1) at x2 = 0 and (0, 1) at x2 = h; both give d2 p0 = -F2.
  PoissonBC bc;
  bc.kind = BcKind::Neumann;
  bc.bottom.resize(g.n1());
  bc.top.resize(g.n1());
  for (int i = 0; i < g.n1(); ++i) {
    bc.bottom[i] = -F.c2(i, 0);
    bc.top[i] = -F.c2(i, g.n2());
  }
  // Differencing a constant background leaves rounding of order eps U^2 / dx2.
  double umax = 0;
  for (double v : u0.c1.values()) umax = std::max(umax, std::abs(v));
  for (double v : u0.c2.values()) umax = std::max(umax, std::abs(v));
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * umax * umax * g.h() / g.min_dx2();
  PoissonResult res = poisson_solve(rhs, bc, 1e-3, floor);
  if (details) *details = res;
  return res.p;
}

CompatReport check_compat(const VectorField& u0, const VectorField& f0,
                          const BackgroundFlow& background, TangentConvention convention) {
  CompatReport rep;
  PoissonResult details;
  rep.p0 = solve_p0(u0, f0, background, &details);
  rep.poisson_residual = details.residual;
  rep.compat_defect = details.compat_defect;

  const auto& g = u0.grid();
  const int top = g.n2();
  const double s = (convention == TangentConvention::InflowMinusE1) ? -1.0 : 1.0;
  const VectorField F = convective_term(u0);
  const ScalarField dp = ddx1(rep.p0);
  const bool forced = static_cast<bool>(f0.c1.grid_ptr());
  for (int i = 0; i < g.n1(); ++i) {
    rep.cond_minus1_residual =
        std::max(rep.cond_minus1_residual, std::abs(s * u0.c1(i, top) - s * background.a));
    const double bracket = -F.c1(i, top) - dp(i, top) + (forced ? f0.c1(i, top) : 0.0);
    // dt U^tau = 0 for a constant background.
    rep.cond_0_residual = std::max(rep.cond_0_residual, std::abs(0.0 - s * bracket));
  }
  return rep;
}

VectorField repaired_forcing(const ScalarField& p0) {
  const auto& g = p0.grid();
  const double h = g.h();
  ScalarField zeta(p0.grid_ptr());
  for (int j = 0; j <= g.n2(); ++j) {
    const double z = smooth_step((g.x2(j) - 0.75 * h) / (0.125 * h)).f;
    for (int i = 0; i < g.n1(); ++i) zeta(i, j) = z;
  }
  return {zeta * ddx1(p0), zeta * ddx2(p0)};
}

}  // namespace vvl
