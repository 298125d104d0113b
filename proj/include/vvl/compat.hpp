#pragma once

#include <string>

#include "vvl/field.hpp"
#include "vvl/poisson.hpp"

namespace vvl {

// Tangent along the inflow wall x2 = h. The default follows the orientation
// where (n, tau) matches (e1, e2): tau = (-1, 0), so u^tau = -u1 on the inflow.
enum class TangentConvention { InflowMinusE1, InflowPlusE1 };

struct CompatReport {
  ScalarField p0;
  double cond_minus1_residual = 0;  // max over inflow |u0^tau - U^tau|
  double cond_0_residual = 0;       // max over inflow |dt U^tau - [-u0.grad u0 - grad p0 + f0]^tau|
  double poisson_residual = 0;
  double compat_defect = 0;
  // Conditions of order >= 1 are not evaluated.
  std::string higher_order = "unchecked";
};

// u0 . grad u0 for the full velocity field (spectral d1, finite-difference d2).
VectorField convective_term(const VectorField& u0);

// Initial pressure of the inviscid problem: Lap p0 = -div(u0 . grad u0) with
// grad p0 . n = -(u0 . grad u0) . n on both walls (constant background, so
// dt U = 0). u0 is the full velocity; f0 does not enter the displayed problem
// and is accepted for interface symmetry with check_compat.
ScalarField solve_p0(const VectorField& u0, const VectorField& f0,
                     const BackgroundFlow& background, PoissonResult* details = nullptr);

CompatReport check_compat(const VectorField& u0, const VectorField& f0,
                          const BackgroundFlow& background,
                          TangentConvention convention = TangentConvention::InflowMinusE1);

// f0 = zeta(x2) grad p0 with zeta = 1 on [7h/8, h] and 0 below 3h/4, so the
// tangential part of the cond_0 bracket vanishes on the inflow wall.
VectorField repaired_forcing(const ScalarField& p0);

}  // namespace vvl
