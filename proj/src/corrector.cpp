#include "vvl/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vvl/errors.hpp"
#include "vvl/operators.hpp"

namespace vvl {

Jet CutoffSpec::eval(double x2) const {
  const double q = h / 4;
  const Jet s = smooth_step((x2 - q) / q);
  Jet r;
  r.f = 1 - s.f;
  r.d1 = -s.d1 / q;
  r.d2 = -s.d2 / (q * q);
  r.d3 = -s.d3 / (q * q * q);
  return r;
}

const std::vector<std::string> kNormNames = {"z1",   "z2",   "z",    "dz_dt", "d1z1",
                                             "d2z1", "d1z2", "d2z2", "z_grad_z"};

const std::map<std::string, double> kNormExponents = {
    {"z1", 0.5},   {"z2", 1.0},   {"z", 0.5},    {"dz_dt", 0.5},   {"d1z1", 0.5},
    {"d2z1", -0.5}, {"d1z2", 1.0}, {"d2z2", 0.5}, {"z_grad_z", 0.5}};

namespace {

struct Built {
  ScalarField psi;
  VectorField z, zt;
  Gradient gz, gzt;
};

Built build(const GridPtr& grid, const std::vector<double>& g0, const std::vector<double>& g1,
            const std::vector<double>& g2, double nu, double U, const CutoffSpec& cut) {
  Built b;
  b.psi = ScalarField(grid);
  b.z = VectorField(grid);
  b.zt = VectorField(grid);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      b.gz.g[i][k] = ScalarField(grid);
      b.gzt.g[i][k] = ScalarField(grid);
    }
  const double ell = nu / U;
  for (int j = 0; j <= grid->n2(); ++j) {
    const double x2 = grid->x2(j);
    const double e = std::exp(-x2 / ell);
    const double one_minus_e = -std::expm1(-x2 / ell);
    const Jet phi = cut.eval(x2);
    for (int i = 0; i < grid->n1(); ++i) {
      const double psi = g0[i] * ell * one_minus_e;
      const double zt1 = -g0[i] * e;
      const double zt2 = ell * one_minus_e * g1[i];
      const double a11 = -g1[i] * e;
      const double a12 = g0[i] * e / ell;
      const double a21 = ell * one_minus_e * g2[i];
      const double a22 = e * g1[i];
      b.psi(i, j) = psi;
      b.zt.c1(i, j) = zt1;
      b.zt.c2(i, j) = zt2;
      b.gzt.g[0][0](i, j) = a11;
      b.gzt.g[0][1](i, j) = a12;
      b.gzt.g[1][0](i, j) = a21;
      b.gzt.g[1][1](i, j) = a22;
      b.z.c1(i, j) = phi.f * zt1 - phi.d1 * psi;
      b.z.c2(i, j) = phi.f * zt2;
      b.gz.g[0][0](i, j) = phi.f * a11 - phi.d1 * zt2;
      b.gz.g[0][1](i, j) = phi.f * a12 + 2 * phi.d1 * zt1 - psi * phi.d2;
      b.gz.g[1][0](i, j) = phi.f * a21;
      b.gz.g[1][1](i, j) = phi.f * a22 + phi.d1 * zt2;
    }
  }
  return b;
}

}  // namespace

CorrectorFields eval_corrector(const BoundaryTrace& trace_v1, const BoundaryTrace& trace_v1_x1,
                               const BoundaryTrace& trace_v1_x1x1,
                               const BoundaryTrace& trace_dv1_dt, double nu,
                               const BackgroundFlow& background, const CutoffSpec& cutoff,
                               const GridPtr& grid) {
  if (!(nu > 0)) throw ConfigError("corrector: nu must be positive");
  if (!(background.U > 0)) throw ConfigError("corrector: U must be positive");
  const std::size_t n1 = grid->n1();
  for (const auto* t : {&trace_v1, &trace_v1_x1, &trace_v1_x1x1, &trace_dv1_dt})
    if (t->values.size() != n1) throw ConfigError("corrector: trace length must equal n1");

  CorrectorFields c;
  c.grid = grid;
  c.nu = nu;
  c.background = background;
  c.trace = trace_v1.values;
  Built b = build(grid, trace_v1.values, trace_v1_x1.values, trace_v1_x1x1.values, nu,
                  background.U, cutoff);
  c.psi = std::move(b.psi);
  c.z = std::move(b.z);
  c.z_tilde = std::move(b.zt);
  c.grad_z = std::move(b.gz);
  c.grad_z_tilde = std::move(b.gzt);

  const auto& gt = trace_dv1_dt.values;
  const auto gt1 = trace_derivative(*grid, gt, 1);
  const auto gt2 = trace_derivative(*grid, gt, 2);
  Built bt = build(grid, gt, gt1, gt2, nu, background.U, cutoff);
  c.dz_dt = std::move(bt.z);
  return c;
}

CorrectorFields eval_corrector(const std::vector<double>& trace,
                               const std::vector<double>& trace_dt, double nu,
                               const BackgroundFlow& background, const GridPtr& grid) {
  BoundaryTrace t0{Wall::Outflow, trace};
  BoundaryTrace t1{Wall::Outflow, trace_derivative(*grid, trace, 1)};
  BoundaryTrace t2{Wall::Outflow, trace_derivative(*grid, trace, 2)};
  BoundaryTrace tt{Wall::Outflow, trace_dt};
  return eval_corrector(t0, t1, t2, tt, nu, background, CutoffSpec{grid->h()}, grid);
}

double key_cancellation_residual(const CorrectorFields& c) {
  const auto& d2 = c.grad_z_tilde.g[0][1].values();
  const auto& z1 = c.z_tilde.c1.values();
  const double U2 = -c.background.U;
  double r = 0;
  for (std::size_t k = 0; k < z1.size(); ++k) r = std::max(r, std::abs(c.nu * d2[k] - U2 * z1[k]));
  return r;
}

double key_cancellation_residual_fd(const CorrectorFields& c) {
  const ScalarField d2 = ddx2(c.z_tilde.c1);
  const auto& z1 = c.z_tilde.c1.values();
  const double U2 = -c.background.U;
  double r = 0;
  for (std::size_t k = 0; k < z1.size(); ++k)
    r = std::max(r, std::abs(c.nu * d2.values()[k] - U2 * z1[k]));
  return r;
}

double key_cancellation_scale(const CorrectorFields& c) {
  return linf_norm(c.z_tilde.c1) * c.background.U;
}

VectorField corrector_self_advection(const CorrectorFields& c) {
  const auto& g = c.grad_z.g;
  VectorField r(c.grid);
  for (int i = 0; i < 2; ++i) r[i] = c.z.c1 * g[i][0] + c.z.c2 * g[i][1];
  return r;
}

NormTable corrector_norm_table(const CorrectorFields& c) {
  const double U = c.background.U;
  const double need = c.nu / (2 * U);
  if (c.grid->min_dx2() > need) {
    std::ostringstream msg;
    msg << "corrector norms: layer under-resolved (smallest x2 cell " << c.grid->min_dx2()
        << " > nu/(2U) = " << need << ")";
    throw NumericalError(msg.str());
  }
  NormTable t;
  t["z1"] = l2_norm(c.z.c1);
  t["z2"] = l2_norm(c.z.c2);
  t["z"] = l2_norm(c.z);
  t["dz_dt"] = l2_norm(c.dz_dt);
  t["d1z1"] = l2_norm(c.grad_z.g[0][0]);
  t["d2z1"] = l2_norm(c.grad_z.g[0][1]);
  t["d1z2"] = l2_norm(c.grad_z.g[1][0]);
  t["d2z2"] = l2_norm(c.grad_z.g[1][1]);
  t["z_grad_z"] = l2_norm(corrector_self_advection(c));
  return t;
}

WeightedNorms weighted_bound_check(const CorrectorFields& c, double trace_sup) {
  const auto& g = *c.grid;
  ScalarField a(c.grid), b(c.grid);
  const auto& d2z1 = c.grad_z.g[0][1];
  for (int j = 0; j <= g.n2(); ++j) {
    const double x = g.x2(j);
    for (int i = 0; i < g.n1(); ++i) {
      a(i, j) = x * x * d2z1(i, j);
      b(i, j) = x * d2z1(i, j);
    }
  }
  WeightedNorms w{linf_norm(a), l2_norm(b)};
  if (trace_sup == 0 && (w.winf > 0 || w.w2 > 0))
    throw NumericalError("weighted bounds: zero trace with nonzero weighted norms");
  return w;
}

double pure_layer_sup(const ChannelGrid& g, double nu, double U) {
  double m = 0;
  for (int j = 0; j <= g.n2(); ++j) {
    const double x = g.x2(j);
    m = std::max(m, x * x * (U / nu) * std::exp(-U * x / nu));
  }
  return m;
}

double pure_layer_integral(const ChannelGrid& g, double nu, double U) {
  double s = 0;
  const auto& w = g.weights();
  for (int j = 0; j <= g.n2(); ++j) {
    const double x = g.x2(j);
    s += w[j] * x * x * std::exp(-2 * U * x / nu);
  }
  return s;
}

}  // namespace vvl
