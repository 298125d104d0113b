#pragma once

#include <vector>

#include "vvl/field.hpp"

namespace vvl {

// Spectral x1 derivatives; the Nyquist mode is dropped by ddx1 so that the
// discrete operator stays real and skew-symmetric.
ScalarField ddx1(const ScalarField& f);
ScalarField ddx1x1(const ScalarField& f);

// Second-order x2 derivatives: centered in the interior, one-sided at walls.
ScalarField ddx2(const ScalarField& f);
ScalarField d2dx2(const ScalarField& f);
// Upwind-biased x2 derivative for transport by a downward velocity.
ScalarField ddx2_upwind(const ScalarField& f);

ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);

ScalarField apply_x2(const std::vector<Stencil>& st, const ScalarField& f);

// Trapezoid in x2, uniform (spectrally exact) in x1.
double integrate(const ScalarField& f);
double inner(const ScalarField& f, const ScalarField& g);
double inner(const VectorField& u, const VectorField& v);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);
double linf_norm(const ScalarField& f);
double linf_norm(const VectorField& v);

struct Gradient {
  // g[i][k] = d_k of component i.
  ScalarField g[2][2];
};
Gradient gradient(const VectorField& v);
double inner(const Gradient& a, const Gradient& b);

// 2/3-rule truncation: zero modes with m > n1/3, and the Nyquist mode.
void truncate_modes(SpectralField& s);
ScalarField dealias(const ScalarField& f);

// (a . grad) b with the product dealiased.
VectorField advect(const VectorField& a, const VectorField& b);

// Mean over x1 and x2 with quadrature weights.
double mean(const ScalarField& f);

}  // namespace vvl
