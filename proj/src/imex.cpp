#include "vvl/imex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vvl/errors.hpp"
#include "vvl/operators.hpp"

namespace vvl {

const ImexTableau& ars443() {
  static const ImexTableau t = [] {
    ImexTableau r;
    r.name = "ARS(4,4,3)";
    r.stages = 5;
    r.gamma = 0.5;
    r.c = {0.0, 0.5, 2.0 / 3.0, 0.5, 1.0};
    r.ae = {{0, 0, 0, 0, 0},
            {0.5, 0, 0, 0, 0},
            {11.0 / 18.0, 1.0 / 18.0, 0, 0, 0},
            {5.0 / 6.0, -5.0 / 6.0, 0.5, 0, 0},
            {0.25, 1.75, 0.75, -1.75, 0}};
    r.ai = {{0, 0, 0, 0, 0},
            {0, 0.5, 0, 0, 0},
            {0, 1.0 / 6.0, 0.5, 0, 0},
            {0, -0.5, 0.5, 0.5, 0},
            {0, 1.5, -1.5, 0.5, 0.5}};
    return r;
  }();
  return t;
}

namespace {

ConstrainedSpec stage_spec(const FlowModel& m, double sigma) {
  ConstrainedSpec s;
  s.sigma = sigma;
  s.nu = m.nu;
  if (m.transport) {
    s.U = m.background.U;
    s.a = m.background.a;
  }
  s.fix_tangential_bottom = m.noslip_bottom;
  s.fix_tangential_top = true;
  return s;
}

double positive_dt(double dt) {
  if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
  return dt;
}

ConstrainedSpec projector_spec(const FlowModel& m) {
  ConstrainedSpec s;
  s.fix_tangential_bottom = m.noslip_bottom;
  s.fix_tangential_top = true;
  return s;
}

}  // namespace

ChannelIntegrator::ChannelIntegrator(GridPtr grid, FlowModel model, double dt,
                                     const ImexTableau& tableau)
    : grid_(grid), model_(std::move(model)), dt_(dt), tab_(tableau),
      stage_solver_(grid, stage_spec(model_, 1.0 / (tableau.gamma * positive_dt(dt)))),
      tendency_projector_(grid, projector_spec(model_)) {}

VectorField ChannelIntegrator::explicit_terms(double t, const VectorField& v) const {
  VectorField r(grid_);
  if (model_.nonlinear) r -= advect(v, v);
  if (model_.forcing) r += model_.forcing(t);
  return r;
}

VectorField ChannelIntegrator::linear_terms(const VectorField& v) const {
  VectorField r(grid_);
  for (int c = 0; c < 2; ++c) {
    if (model_.nu != 0) r[c] += model_.nu * laplacian(v[c]);
    if (model_.transport) {
      if (model_.background.a != 0) r[c] -= model_.background.a * ddx1(v[c]);
      r[c] += model_.background.U * ddx2_upwind(v[c]);
    }
  }
  return r;
}

VectorField ChannelIntegrator::tendency(double t, const VectorField& v) const {
  VectorField f = explicit_terms(t, v) + linear_terms(v);
  VectorField out;
  tendency_projector_.solve(f, out);
  return out;
}

double ChannelIntegrator::cfl_number(const VectorField& v) const {
  const auto& g = *grid_;
  const int n = g.n2();
  double c = 0;
  for (int j = 0; j <= n; ++j) {
    double dx2 = std::numeric_limits<double>::infinity();
    if (j > 0) dx2 = std::min(dx2, g.x2(j) - g.x2(j - 1));
    if (j < n) dx2 = std::min(dx2, g.x2(j + 1) - g.x2(j));
    for (int i = 0; i < g.n1(); ++i)
      c = std::max(c, std::abs(v.c1(i, j)) / g.dx1() + std::abs(v.c2(i, j)) / dx2);
  }
  return c * dt_;
}

void ChannelIntegrator::step(VectorField& v, ScalarField& p, double t) const {
  if (model_.nonlinear) {
    const double cfl = cfl_number(v);
    if (cfl > kCflLimit) {
      throw NumericalError("CFL violation: number " + std::to_string(cfl) + " > " +
                           std::to_string(kCflLimit) + "; suggested dt " +
                           std::to_string(0.5 * dt_ * kCflLimit / cfl));
    }
  }
  const int s = tab_.stages;
  const double sigma = 1.0 / (tab_.gamma * dt_);
  std::vector<VectorField> kexp(s), kimp(s);
  kexp[0] = explicit_terms(t, v);
  VectorField y;
  for (int i = 1; i < s; ++i) {
    VectorField r = v;
    for (int j = 0; j < i; ++j) {
      if (tab_.ae[i][j] != 0) r += (dt_ * tab_.ae[i][j]) * kexp[j];
      if (tab_.ai[i][j] != 0) r += (dt_ * tab_.ai[i][j]) * kimp[j];
    }
    stage_solver_.solve(sigma * r, y, &p);
    kimp[i] = sigma * (y - r);
    if (i + 1 < s) kexp[i] = explicit_terms(t + tab_.c[i] * dt_, y);
  }
  v = std::move(y);
}

}  // namespace vvl
