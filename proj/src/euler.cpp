#include "vvl/euler.hpp"

#include <cmath>

#include "vvl/errors.hpp"

namespace vvl {

namespace {

FlowModel euler_model(const BackgroundFlow& bg, Forcing forcing, const SolverOptions& o) {
  validate(bg);
  FlowModel m;
  m.background = bg;
  m.nu = 0;
  m.noslip_bottom = false;
  m.nonlinear = o.nonlinear;
  m.transport = o.transport;
  m.forcing = std::move(forcing);
  return m;
}

}  // namespace

EulerSolver::EulerSolver(GridPtr grid, BackgroundFlow background, double dt, Forcing forcing,
                         SolverOptions opts)
    : integ_(std::move(grid), euler_model(background, std::move(forcing), opts), dt) {}

void EulerSolver::step(EulerState& s) const {
  integ_.step(s.v_bar, s.p_bar, s.t);
  s.t += integ_.dt();
}

VectorField EulerSolver::rhs(const EulerState& s) const {
  return integ_.explicit_terms(s.t, s.v_bar) + integ_.linear_terms(s.v_bar);
}

VectorField EulerSolver::time_derivative(const EulerState& s) const {
  return integ_.tendency(s.t, s.v_bar);
}

std::vector<double> EulerSolver::trace_time_derivative(const EulerState& s) const {
  const VectorField d = time_derivative(s);
  return {d.c1.row(0), d.c1.row(0) + d.grid().n1()};
}

EulerState make_euler_state(VectorField v_bar, BackgroundFlow background, Forcing forcing) {
  EulerState s;
  s.p_bar = ScalarField(v_bar.grid_ptr());
  s.v_bar = std::move(v_bar);
  s.background = background;
  s.forcing = std::move(forcing);
  return s;
}

VectorField euler_rhs(const EulerState& state) {
  // dt is irrelevant for the right-hand side; any positive value works.
  EulerSolver solver(state.v_bar.grid_ptr(), state.background, 1.0, state.forcing);
  return solver.rhs(state);
}

EulerState euler_step(const EulerState& state, double dt) {
  EulerSolver solver(state.v_bar.grid_ptr(), state.background, dt, state.forcing);
  EulerState next = state;
  solver.step(next);
  return next;
}

int step_count(double T, double dt) {
  if (!(dt > 0) || !(T >= 0)) throw ConfigError("run: need dt > 0 and T >= 0");
  const double n = T / dt;
  const long r = std::lround(n);
  if (std::abs(n - r) > 1e-9 * std::max(1.0, n))
    throw ConfigError("run: T_final must be an integer multiple of dt");
  return static_cast<int>(r);
}

std::vector<EulerSnapshot> run_euler(const VectorField& initial, const BackgroundFlow& background,
                                     const RunParams& params) {
  if (params.snapshot_stride < 1) throw ConfigError("run: snapshot_stride must be >= 1");
  const int steps = step_count(params.T, params.dt);
  EulerSolver solver(initial.grid_ptr(), background, params.dt, params.forcing, params.options);
  EulerState s = make_euler_state(initial, background, params.forcing);
  std::vector<EulerSnapshot> out;
  auto record = [&] {
    EulerSnapshot snap;
    snap.t = s.t;
    snap.v_bar = s.v_bar;
    snap.trace.assign(s.v_bar.c1.row(0), s.v_bar.c1.row(0) + initial.grid().n1());
    snap.trace_dt = solver.trace_time_derivative(s);
    out.push_back(std::move(snap));
  };
  record();
  for (int n = 1; n <= steps; ++n) {
    solver.step(s);
    s.t = n * params.dt;
    if (n % params.snapshot_stride == 0) record();
  }
  return out;
}

}  // namespace vvl
