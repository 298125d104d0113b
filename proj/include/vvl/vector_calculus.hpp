#pragma once

#include <vector>

#include "vvl/field.hpp"

namespace vvl {

enum class Wall { Outflow, Inflow };  // x2 = 0 and x2 = h

struct BoundaryTrace {
  Wall which = Wall::Outflow;
  std::vector<double> values;  // one per x1 node
};

enum class ProjectionBC { NoSlip, NoPenetration };

// Second-order divergence evaluated on wall-normal cells (midpoint rule) and
// interpolated to the nodes; the constrained solves make it vanish exactly.
ScalarField divergence(const VectorField& v);
// (-d2 psi, d1 psi)
VectorField perp_gradient(const ScalarField& psi);
VectorField leray_project(const VectorField& v, ProjectionBC bc);
BoundaryTrace boundary_trace(const VectorField& v, Wall which, int component);
BoundaryTrace boundary_trace(const ScalarField& f, Wall which);

// Periodic derivatives of a trace (spectral, Nyquist dropped for odd order).
std::vector<double> trace_derivative(const ChannelGrid& g, const std::vector<double>& f,
                                     int order);

// C-infinity step: 0 for t <= 0, 1 for t >= 1, built from e^{-1/t}.
// Returns the value and the first three derivatives.
struct Jet {
  double f = 0, d1 = 0, d2 = 0, d3 = 0;
};
Jet smooth_step(double t);

// Plateau bump vanishing on [0, collar] and [h - collar, h], rising over
// `ramp` from each collar edge (ramp <= (h - 2 collar)/2).
Jet collar_bump(double x2, double h, double collar, double ramp);

struct InitialDataSpec {
  double amplitude = 0.1;
  int mode = 1;
  double collar = 0.05;
  // Ramp as a fraction of the half-support (h/2 - collar); 1 gives a broad
  // bump with a single plateau point.
  double ramp_fraction = 1.0;
};

// v0 = perp gradient of amplitude * sin(2 pi mode x1 / L) * bump(x2),
// differentiated analytically.
VectorField make_initial_data(const GridPtr& grid, double amplitude, int mode, double collar,
                              double ramp_fraction = 1.0);
VectorField make_initial_data(const GridPtr& grid, const InitialDataSpec& spec);

}  // namespace vvl
