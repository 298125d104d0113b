#include "vvl/constrained_solver.hpp"

#include <algorithm>
#include <tuple>

#include "vvl/errors.hpp"
#include "vvl/operators.hpp"

namespace vvl {

namespace {

struct Entry {
  int row, col;
  cplx val;
};

void add_stencil(std::vector<Entry>& e, int row, const Stencil& s, int comp, cplx scale) {
  for (int k = 0; k < s.count; ++k) e.push_back({row, 3 * (s.first + k) + comp, scale * s.w[k]});
}

BandedLU assemble(int n, const std::vector<Entry>& entries) {
  int kl = 0, ku = 0;
  for (const auto& e : entries) {
    kl = std::max(kl, e.row - e.col);
    ku = std::max(ku, e.col - e.row);
  }
  BandedLU A(n, kl, ku);
  for (const auto& e : entries) A.add(e.row, e.col, e.val);
  return A;
}

}  // namespace

ConstrainedSolver::ConstrainedSolver(GridPtr grid, ConstrainedSpec spec)
    : grid_(std::move(grid)), spec_(spec) {
  const auto& g = *grid_;
  const int n = g.n2();
  const auto& d2 = g.d2();
  const auto& up = g.d1_up();
  const double nu = spec_.nu, U = spec_.U, sigma = spec_.sigma;
  if (!(sigma > 0)) throw NumericalError("constrained solver: sigma must be positive");

  auto fixed = [&](int j) {
    return (j == 0 && spec_.fix_tangential_bottom) || (j == n && spec_.fix_tangential_top);
  };

  // Unknowns per node j: v1 at 3j, v2 at 3j+1, and for j < n the pressure of
  // cell (x2_j, x2_{j+1}) at 3j+2. Row 3j+2 is continuity over that cell.
  const int size = 3 * n + 2;
  lu_.resize(g.modes());
  const int nyq = g.n1() / 2;
  for (int m = 1; m < g.modes(); ++m) {
    if (m == nyq) continue;
    const double k = g.wavenumber(m);
    const cplx ik(0, k);
    const cplx diag = sigma + nu * k * k + spec_.a * ik;
    std::vector<Entry> e;
    for (int j = 0; j <= n; ++j) {
      const int ru = 3 * j, rw = 3 * j + 1;
      if (fixed(j)) {
        e.push_back({ru, ru, 1.0});
      } else {
        e.push_back({ru, ru, diag});
        if (nu != 0) add_stencil(e, ru, d2[j], 0, -nu);
        if (U != 0) add_stencil(e, ru, up[j], 0, -U);
        add_stencil(e, ru, g.center_to_node(j), 2, ik);
      }
      if (j == 0 || j == n) {
        e.push_back({rw, rw, 1.0});
      } else {
        e.push_back({rw, rw, diag});
        if (nu != 0) add_stencil(e, rw, d2[j], 1, -nu);
        if (U != 0) add_stencil(e, rw, up[j], 1, -U);
        const double dc = g.x2_center(j) - g.x2_center(j - 1);
        e.push_back({rw, 3 * j + 2, 1.0 / dc});
        e.push_back({rw, 3 * (j - 1) + 2, -1.0 / dc});
      }
      if (j < n) {
        const int rc = 3 * j + 2;
        const double dx = g.x2(j + 1) - g.x2(j);
        e.push_back({rc, 3 * j, 0.5 * ik});
        e.push_back({rc, 3 * (j + 1), 0.5 * ik});
        e.push_back({rc, 3 * j + 1, -1.0 / dx});
        e.push_back({rc, 3 * (j + 1) + 1, 1.0 / dx});
      }
    }
    lu_[m] = assemble(size, e);
    lu_[m].factor();
  }

  // Mean mode: v2 = 0 and v1 obeys a scalar wall-normal problem.
  std::vector<Entry> e;
  for (int j = 0; j <= n; ++j) {
    if (fixed(j)) {
      e.push_back({j, j, 1.0});
      continue;
    }
    e.push_back({j, j, sigma});
    for (int k = 0; k < d2[j].count; ++k)
      if (nu != 0) e.push_back({j, d2[j].first + k, -nu * d2[j].w[k]});
    for (int k = 0; k < up[j].count; ++k)
      if (U != 0) e.push_back({j, up[j].first + k, -U * up[j].w[k]});
  }
  mean_lu_ = assemble(n + 1, e);
  mean_lu_.factor();
}

void ConstrainedSolver::solve(const SpectralField& r1, const SpectralField& r2,
                              SpectralField& v1, SpectralField& v2, SpectralField& p) const {
  const auto& g = *grid_;
  const int n = g.n2();
  const int nyq = g.n1() / 2;
  v1 = SpectralField(grid_);
  v2 = SpectralField(grid_);
  p = SpectralField(grid_);
  const bool fb = spec_.fix_tangential_bottom, ft = spec_.fix_tangential_top;

  auto to_nodes = [&](const std::vector<cplx>& q, int m) {
    for (int j = 0; j <= n; ++j) {
      const Stencil& s = g.center_to_node(j);
      p(m, j) = s.w[0] * q[s.first] + s.w[1] * q[s.first + 1];
    }
  };

  std::vector<cplx> b(3 * n + 2), q(n);
  for (int m = 1; m < g.modes(); ++m) {
    if (m == nyq) continue;
    for (int j = 0; j <= n; ++j) {
      const bool fx = (j == 0 && fb) || (j == n && ft);
      b[3 * j] = fx ? cplx(0, 0) : r1(m, j);
      b[3 * j + 1] = (j == 0 || j == n) ? cplx(0, 0) : r2(m, j);
      if (j < n) b[3 * j + 2] = 0;
    }
    lu_[m].solve(b.data());
    for (int j = 0; j <= n; ++j) {
      v1(m, j) = b[3 * j];
      v2(m, j) = b[3 * j + 1];
      if (j < n) q[j] = b[3 * j + 2];
    }
    to_nodes(q, m);
  }

  std::vector<cplx> b0(n + 1);
  for (int j = 0; j <= n; ++j) {
    const bool fx = (j == 0 && fb) || (j == n && ft);
    b0[j] = fx ? cplx(0, 0) : cplx(r1(0, j).real(), 0);
  }
  mean_lu_.solve(b0.data());
  for (int j = 0; j <= n; ++j) v1(0, j) = cplx(b0[j].real(), 0);

  // Mean pressure: the interior x2-momentum rows reduce to a difference
  // between neighbouring cells.
  q[0] = 0;
  for (int j = 1; j < n; ++j)
    q[j] = q[j - 1] + r2(0, j).real() * (g.x2_center(j) - g.x2_center(j - 1));
  to_nodes(q, 0);
  double qm = 0;
  const auto& H = g.weights();
  for (int j = 0; j <= n; ++j) qm += H[j] * p(0, j).real();
  qm /= g.h();
  for (int j = 0; j <= n; ++j) p(0, j) = cplx(p(0, j).real() - qm, 0);
}

void ConstrainedSolver::solve(const VectorField& rhs, VectorField& v, ScalarField* p) const {
  SpectralField s1 = to_spectral(rhs.c1), s2 = to_spectral(rhs.c2);
  SpectralField o1, o2, op;
  solve(s1, s2, o1, o2, op);
  v.c1 = to_physical(o1);
  v.c2 = to_physical(o2);
  if (p) *p = to_physical(op);
}

}  // namespace vvl
