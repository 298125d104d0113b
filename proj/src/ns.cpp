#include "vvl/ns.hpp"

#include "vvl/errors.hpp"

namespace vvl {

namespace {

FlowModel ns_model(double nu, const BackgroundFlow& bg, Forcing forcing, const SolverOptions& o) {
  validate(bg);
  if (!(nu > 0)) throw ConfigError("navier-stokes: nu must be positive");
  FlowModel m;
  m.background = bg;
  m.nu = nu;
  m.noslip_bottom = true;
  m.nonlinear = o.nonlinear;
  m.transport = o.transport;
  m.forcing = std::move(forcing);
  return m;
}

}  // namespace

NSSolver::NSSolver(GridPtr grid, double nu, BackgroundFlow background, double dt,
                   Forcing forcing, SolverOptions opts)
    : integ_(std::move(grid), ns_model(nu, background, std::move(forcing), opts), dt) {}

void NSSolver::step(NSState& s) const {
  integ_.step(s.v, s.p, s.t);
  s.t += integ_.dt();
}

NSState make_ns_state(VectorField v, double nu, BackgroundFlow background, Forcing forcing) {
  NSState s;
  s.p = ScalarField(v.grid_ptr());
  s.v = std::move(v);
  s.nu = nu;
  s.background = background;
  s.forcing = std::move(forcing);
  return s;
}

NSState ns_step(const NSState& state, double dt) {
  NSSolver solver(state.v.grid_ptr(), state.nu, state.background, dt, state.forcing);
  NSState next = state;
  solver.step(next);
  return next;
}

std::vector<NSSnapshot> run_ns(const VectorField& initial, double nu,
                               const BackgroundFlow& background, const RunParams& params) {
  if (params.snapshot_stride < 1) throw ConfigError("run: snapshot_stride must be >= 1");
  const int steps = step_count(params.T, params.dt);
  NSSolver solver(initial.grid_ptr(), nu, background, params.dt, params.forcing, params.options);
  NSState s = make_ns_state(initial, nu, background, params.forcing);
  std::vector<NSSnapshot> out{{0.0, s.v}};
  for (int n = 1; n <= steps; ++n) {
    solver.step(s);
    s.t = n * params.dt;
    if (n % params.snapshot_stride == 0) out.push_back({s.t, s.v});
  }
  return out;
}

}  // namespace vvl
