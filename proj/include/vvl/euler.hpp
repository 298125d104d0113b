#pragma once

#include <vector>

#include "vvl/imex.hpp"

namespace vvl {

struct EulerState {
  VectorField v_bar;
  ScalarField p_bar;
  double t = 0;
  BackgroundFlow background;
  Forcing forcing;  // f - dt U - U.grad U, i.e. f for constant U
};

struct SolverOptions {
  bool nonlinear = true;
  bool transport = true;
};

class EulerSolver {
 public:
  EulerSolver(GridPtr grid, BackgroundFlow background, double dt, Forcing forcing = {},
              SolverOptions opts = {});

  const ChannelIntegrator& integrator() const { return integ_; }
  double dt() const { return integ_.dt(); }

  void step(EulerState& s) const;
  // Unprojected right-hand side -(vbar + U).grad vbar + forcing.
  VectorField rhs(const EulerState& s) const;
  // Constrained time derivative of vbar.
  VectorField time_derivative(const EulerState& s) const;
  // d/dt of the outflow trace vbar1(x1, 0), read off time_derivative.
  std::vector<double> trace_time_derivative(const EulerState& s) const;

 private:
  ChannelIntegrator integ_;
};

EulerState make_euler_state(VectorField v_bar, BackgroundFlow background, Forcing forcing = {});

VectorField euler_rhs(const EulerState& state);
EulerState euler_step(const EulerState& state, double dt);

struct EulerSnapshot {
  double t = 0;
  VectorField v_bar;
  std::vector<double> trace;     // vbar1(t, x1, 0)
  std::vector<double> trace_dt;  // its time derivative
};

struct RunParams {
  double dt = 2.5e-3;
  double T = 0.5;
  int snapshot_stride = 1;
  Forcing forcing;
  SolverOptions options;
};

std::vector<EulerSnapshot> run_euler(const VectorField& initial, const BackgroundFlow& background,
                                     const RunParams& params);

// Number of steps covering [0, T] with the given dt (T must be a multiple).
int step_count(double T, double dt);

}  // namespace vvl
