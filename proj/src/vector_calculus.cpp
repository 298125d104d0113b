#include "vvl/vector_calculus.hpp"

#include <cmath>
#include <numbers>

#include "vvl/constrained_solver.hpp"
#include "vvl/errors.hpp"
#include "vvl/operators.hpp"

namespace vvl {

ScalarField divergence(const VectorField& v) {
  const auto& g = v.grid();
  const int n = g.n2(), n1 = g.n1();
  const ScalarField d1 = ddx1(v.c1);
  std::vector<double> cell(static_cast<std::size_t>(n) * n1);
  for (int j = 0; j < n; ++j) {
    const double dx = g.x2(j + 1) - g.x2(j);
    for (int i = 0; i < n1; ++i)
      cell[j * n1 + i] = 0.5 * (d1(i, j) + d1(i, j + 1)) + (v.c2(i, j + 1) - v.c2(i, j)) / dx;
  }
  ScalarField out(v.grid_ptr());
  for (int j = 0; j <= n; ++j) {
    const Stencil& s = g.center_to_node(j);
    for (int i = 0; i < n1; ++i)
      out(i, j) = s.w[0] * cell[s.first * n1 + i] + s.w[1] * cell[(s.first + 1) * n1 + i];
  }
  return out;
}

VectorField perp_gradient(const ScalarField& psi) {
  return {-1.0 * ddx2(psi), ddx1(psi)};
}

VectorField leray_project(const VectorField& v, ProjectionBC bc) {
  ConstrainedSpec spec;
  spec.fix_tangential_bottom = spec.fix_tangential_top = (bc == ProjectionBC::NoSlip);
  ConstrainedSolver solver(v.grid_ptr(), spec);
  VectorField out;
  solver.solve(v, out);
  return out;
}

BoundaryTrace boundary_trace(const ScalarField& f, Wall which) {
  const auto& g = f.grid();
  const int j = (which == Wall::Outflow) ? 0 : g.n2();
  BoundaryTrace t;
  t.which = which;
  t.values.assign(f.row(j), f.row(j) + g.n1());
  return t;
}

BoundaryTrace boundary_trace(const VectorField& v, Wall which, int component) {
  if (component != 1 && component != 2) throw ConfigError("boundary_trace: component must be 1 or 2");
  return boundary_trace(v[component - 1], which);
}

std::vector<double> trace_derivative(const ChannelGrid& g, const std::vector<double>& f,
                                     int order) {
  const int n1 = g.n1();
  std::vector<double> out(n1, 0.0);
  // Naive DFT over one row: n1 is small and this keeps traces independent of
  // field storage.
  const int nm = g.modes();
  std::vector<cplx> c(nm);
  for (int m = 0; m < nm; ++m) {
    cplx s(0, 0);
    for (int i = 0; i < n1; ++i) {
      const double ang = -2.0 * std::numbers::pi * m * i / n1;
      s += f[i] * cplx(std::cos(ang), std::sin(ang));
    }
    c[m] = s / static_cast<double>(n1);
  }
  const int nyq = n1 / 2;
  for (int m = 0; m < nm; ++m) {
    const cplx ik(0, g.wavenumber(m));
    c[m] *= std::pow(ik, order);
    if (m == nyq && order % 2 == 1) c[m] = 0;
  }
  for (int i = 0; i < n1; ++i) {
    double s = c[0].real();
    for (int m = 1; m < nm; ++m) {
      const double ang = 2.0 * std::numbers::pi * m * i / n1;
      const cplx e(std::cos(ang), std::sin(ang));
      s += (m == nyq ? 1.0 : 2.0) * (c[m] * e).real();
    }
    out[i] = s;
  }
  return out;
}

namespace {

double logistic(double y) {
  return y >= 0 ? 1.0 / (1.0 + std::exp(-y)) : std::exp(y) / (1.0 + std::exp(y));
}

}  // namespace

Jet smooth_step(double t) {
  Jet r;
  if (t <= 1e-3) return r;
  if (t >= 1 - 1e-3) {
    r.f = 1;
    return r;
  }
  // S = logistic(y), y = 1/(1-t) - 1/t
  const double s = 1 - t;
  const double y = 1 / s - 1 / t;
  const double y1 = 1 / (s * s) + 1 / (t * t);
  const double y2 = 2 / (s * s * s) - 2 / (t * t * t);
  const double y3 = 6 / (s * s * s * s) + 6 / (t * t * t * t);
  const double sg = logistic(y);
  const double g1 = sg * (1 - sg);
  const double g2 = g1 * (1 - 2 * sg);
  const double g3 = g1 * (1 - 6 * sg + 6 * sg * sg);
  r.f = sg;
  r.d1 = g1 * y1;
  r.d2 = g2 * y1 * y1 + g1 * y2;
  r.d3 = g3 * y1 * y1 * y1 + 3 * g2 * y1 * y2 + g1 * y3;
  return r;
}

Jet collar_bump(double x2, double h, double collar, double ramp) {
  const Jet a = smooth_step((x2 - collar) / ramp);
  const Jet b = smooth_step((h - collar - x2) / ramp);
  const double ia = 1 / ramp, ib = -1 / ramp;
  Jet r;
  r.f = a.f * b.f;
  r.d1 = a.d1 * ia * b.f + a.f * b.d1 * ib;
  r.d2 = a.d2 * ia * ia * b.f + 2 * a.d1 * ia * b.d1 * ib + a.f * b.d2 * ib * ib;
  r.d3 = a.d3 * ia * ia * ia * b.f + 3 * a.d2 * ia * ia * b.d1 * ib +
         3 * a.d1 * ia * b.d2 * ib * ib + a.f * b.d3 * ib * ib * ib;
  return r;
}

VectorField make_initial_data(const GridPtr& grid, double amplitude, int mode, double collar,
                              double ramp_fraction) {
  const double h = grid->h();
  if (!(collar > 0) || !(collar < h / 2))
    throw ConfigError("initial data: collar must lie in (0, h/2)");
  if (!(ramp_fraction > 0) || ramp_fraction > 1)
    throw ConfigError("initial data: ramp_fraction must lie in (0, 1]");
  const double ramp = ramp_fraction * (h / 2 - collar);
  const double kappa = 2 * std::numbers::pi * mode / grid->L();
  VectorField v(grid);
  for (int j = 0; j <= grid->n2(); ++j) {
    const Jet b = collar_bump(grid->x2(j), h, collar, ramp);
    for (int i = 0; i < grid->n1(); ++i) {
      const double x1 = grid->x1(i);
      v.c1(i, j) = -amplitude * std::sin(kappa * x1) * b.d1;
      v.c2(i, j) = amplitude * kappa * std::cos(kappa * x1) * b.f;
    }
  }
  return v;
}

VectorField make_initial_data(const GridPtr& grid, const InitialDataSpec& s) {
  return make_initial_data(grid, s.amplitude, s.mode, s.collar, s.ramp_fraction);
}

}  // namespace vvl
