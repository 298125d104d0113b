#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vvl/constrained_solver.hpp"
#include "vvl/field.hpp"

namespace vvl {

// Additive IMEX Runge-Kutta tableau; stage 0 is explicit for both parts.
struct ImexTableau {
  std::string name;
  int stages = 0;
  std::vector<std::vector<double>> ae, ai;
  std::vector<double> c;
  double gamma = 0;  // constant implicit diagonal
};

// Ascher-Ruuth-Spiteri (4,4,3): L-stable, globally stiffly accurate, so the
// step result is the last stage and inherits its constraints exactly.
const ImexTableau& ars443();

using Forcing = std::function<VectorField(double t)>;

// Everything that distinguishes the homogenized Euler and Navier-Stokes
// systems. The implicit part is nu Lap - (a, -U).grad plus pressure and wall
// constraints; the explicit part is -v.grad v + forcing.
struct FlowModel {
  BackgroundFlow background;
  double nu = 0;
  bool noslip_bottom = false;  // tangential condition at the outflow wall
  bool nonlinear = true;
  bool transport = true;       // background transport (a, -U).grad
  Forcing forcing;             // empty means zero
};

class ChannelIntegrator {
 public:
  ChannelIntegrator(GridPtr grid, FlowModel model, double dt,
                    const ImexTableau& tableau = ars443());

  const FlowModel& model() const { return model_; }
  const GridPtr& grid_ptr() const { return grid_; }
  double dt() const { return dt_; }

  // -v.grad v + f(t); the constant background contributes no coupling terms.
  VectorField explicit_terms(double t, const VectorField& v) const;
  // nu Lap v - a d1 v + U d2 v, with the upwind-biased x2 stencil.
  VectorField linear_terms(const VectorField& v) const;
  // Constrained time derivative: projection of explicit + linear terms.
  VectorField tendency(double t, const VectorField& v) const;

  void step(VectorField& v, ScalarField& p, double t) const;

  // dt * max(|v1|/dx1 + |v2|/dx2) over the explicitly advected velocity.
  double cfl_number(const VectorField& v) const;

 private:
  GridPtr grid_;
  FlowModel model_;
  double dt_;
  const ImexTableau& tab_;
  ConstrainedSolver stage_solver_;
  ConstrainedSolver tendency_projector_;
};

// Largest CFL number accepted before a step is refused.
inline constexpr double kCflLimit = 1.0;

}  // namespace vvl
