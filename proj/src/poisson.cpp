#include "vvl/poisson.hpp"

#include <cmath>
#include <string>

#include "vvl/banded.hpp"
#include "vvl/errors.hpp"
#include "vvl/operators.hpp"

namespace vvl {

namespace {

std::vector<cplx> wall_spectrum(const ChannelGrid& g, const GridPtr& gp,
                                const std::vector<double>& data) {
  std::vector<cplx> out(g.modes(), cplx(0, 0));
  if (data.empty()) return out;
  if (static_cast<int>(data.size()) != g.n1())
    throw ConfigError("poisson: wall data must have n1 samples");
  ScalarField tmp(gp);
  std::copy(data.begin(), data.end(), tmp.row(0));
  SpectralField s = to_spectral(tmp);
  for (int m = 0; m < g.modes(); ++m) out[m] = s(m, 0);
  return out;
}

double wall_value(const std::vector<double>& data, int i) {
  return data.empty() ? 0.0 : data[i];
}

double integrate_abs(const ScalarField& f) {
  ScalarField a = f;
  for (auto& v : a.values()) v = std::abs(v);
  return integrate(a);
}

}  // namespace

ScalarField apply_poisson_operator(const ScalarField& p, const PoissonBC& bc) {
  const auto& g = p.grid();
  const int n = g.n2(), n1 = g.n1();
  ScalarField out = ddx1x1(p);
  const auto& x = g.x2_nodes();
  for (int j = 1; j < n; ++j) {
    const double hm = x[j] - x[j - 1], hp = x[j + 1] - x[j];
    for (int i = 0; i < n1; ++i)
      out(i, j) += 2.0 / (hm + hp) * ((p(i, j + 1) - p(i, j)) / hp - (p(i, j) - p(i, j - 1)) / hm);
  }
  const double h0 = x[1] - x[0], hn = x[n] - x[n - 1];
  for (int i = 0; i < n1; ++i) {
    if (bc.kind == BcKind::Neumann) {
      out(i, 0) += 2.0 / h0 * ((p(i, 1) - p(i, 0)) / h0 - wall_value(bc.bottom, i));
      out(i, n) += 2.0 / hn * (wall_value(bc.top, i) - (p(i, n) - p(i, n - 1)) / hn);
    } else {
      out(i, 0) = p(i, 0);
      out(i, n) = p(i, n);
    }
  }
  return out;
}

ScalarField poisson_target(const ScalarField& rhs, const PoissonBC& bc) {
  ScalarField t = rhs;
  if (bc.kind == BcKind::Dirichlet) {
    const int n = rhs.grid().n2();
    for (int i = 0; i < rhs.grid().n1(); ++i) {
      t(i, 0) = wall_value(bc.bottom, i);
      t(i, n) = wall_value(bc.top, i);
    }
  }
  return t;
}

PoissonResult poisson_solve(const ScalarField& rhs, const PoissonBC& bc, double compat_tol,
                            double compat_floor) {
  const auto& g = rhs.grid();
  const int n = g.n2();
  const auto& x = g.x2_nodes();
  const auto& H = g.weights();
  const bool neumann = bc.kind == BcKind::Neumann;

  SpectralField b = to_spectral(rhs);
  const auto gb = wall_spectrum(g, rhs.grid_ptr(), bc.bottom);
  const auto gt = wall_spectrum(g, rhs.grid_ptr(), bc.top);

  PoissonResult res;
  ScalarField rhs_used = rhs;
  if (neumann) {
    // Scale: mean absolute source integrated over x2 plus mean wall fluxes.
    double flux_in = 0;
    double scale = integrate_abs(rhs) / g.L();
    for (int i = 0; i < g.n1(); ++i)
      scale += (std::abs(wall_value(bc.top, i)) + std::abs(wall_value(bc.bottom, i))) / g.n1();
    for (int j = 0; j <= n; ++j) flux_in += H[j] * b(0, j).real();
    const double defect = flux_in - (gt[0].real() - gb[0].real());
    res.compat_defect = scale > 0 ? std::abs(defect) / scale : 0.0;
    if (res.compat_defect > compat_tol && std::abs(defect) > compat_floor)
      throw NumericalError("poisson: incompatible Neumann data (relative defect " +
                           std::to_string(res.compat_defect) + ")");
    const double shift = defect / g.h();
    for (int j = 0; j <= n; ++j) b(0, j) -= shift;
    for (auto& v : rhs_used.values()) v -= shift;
  }

  SpectralField p(rhs.grid_ptr());
  std::vector<cplx> col(n + 1);
  const int nyq = g.n1() / 2;
  for (int m = 0; m < g.modes(); ++m) {
    const double k2 = std::pow(g.wavenumber(m), 2);
    BandedLU A(n + 1, 1, 1);
    for (int j = 1; j < n; ++j) {
      const double hm = x[j] - x[j - 1], hp = x[j + 1] - x[j];
      const double s = 2.0 / (hm + hp);
      A.add(j, j - 1, s / hm);
      A.add(j, j, -s / hm - s / hp - k2);
      A.add(j, j + 1, s / hp);
      col[j] = b(m, j);
    }
    const double h0 = x[1] - x[0], hn = x[n] - x[n - 1];
    if (neumann) {
      A.add(0, 0, -2.0 / (h0 * h0) - k2);
      A.add(0, 1, 2.0 / (h0 * h0));
      col[0] = b(m, 0) + 2.0 / h0 * gb[m];
      A.add(n, n, -2.0 / (hn * hn) - k2);
      A.add(n, n - 1, 2.0 / (hn * hn));
      col[n] = b(m, n) - 2.0 / hn * gt[m];
    } else {
      A.add(0, 0, 1.0);
      col[0] = gb[m];
      A.add(n, n, 1.0);
      col[n] = gt[m];
    }
    if (neumann && m == 0) {
      // Singular mean mode: pin p_0 and remove the mean afterwards.
      A = BandedLU(n + 1, 1, 1);
      A.add(0, 0, 1.0);
      col[0] = 0;
      for (int j = 1; j < n; ++j) {
        const double hm = x[j] - x[j - 1], hp = x[j + 1] - x[j];
        const double s = 2.0 / (hm + hp);
        A.add(j, j - 1, s / hm);
        A.add(j, j, -s / hm - s / hp);
        A.add(j, j + 1, s / hp);
      }
      A.add(n, n, -2.0 / (hn * hn));
      A.add(n, n - 1, 2.0 / (hn * hn));
    }
    if (m == nyq && g.modes() > 1) {
      // The real transform keeps only the real part of this mode.
      for (auto& c : col) c = cplx(c.real(), 0.0);
    }
    A.factor();
    A.solve(col.data());
    for (int j = 0; j <= n; ++j) p(m, j) = col[j];
  }
  res.p = to_physical(p);
  if (neumann) {
    const double mu = mean(res.p);
    for (auto& v : res.p.values()) v -= mu;
  }

  const ScalarField target = poisson_target(rhs_used, bc);
  const ScalarField r = apply_poisson_operator(res.p, bc) - target;
  const double tn = l2_norm(target);
  res.residual = tn > 0 ? l2_norm(r) / tn : l2_norm(r);
  return res;
}

}  // namespace vvl
