#include "vvl/operators.hpp"

#include <algorithm>
#include <cmath>

namespace vvl {

namespace {

ScalarField spectral_multiply(const ScalarField& f, bool second) {
  const auto& g = f.grid();
  SpectralField s = to_spectral(f);
  const int nm = g.modes();
  const int nyq = g.n1() / 2;
  for (int j = 0; j < g.rows(); ++j) {
    for (int m = 0; m < nm; ++m) {
      const double k = g.wavenumber(m);
      if (second) {
        s(m, j) *= -k * k;
      } else {
        s(m, j) = (m == nyq) ? cplx(0, 0) : s(m, j) * cplx(0, k);
      }
    }
  }
  return to_physical(s);
}

}  // namespace

ScalarField ddx1(const ScalarField& f) { return spectral_multiply(f, false); }
ScalarField ddx1x1(const ScalarField& f) { return spectral_multiply(f, true); }

ScalarField apply_x2(const std::vector<Stencil>& st, const ScalarField& f) {
  const auto& g = f.grid();
  const int n1 = g.n1();
  ScalarField r(f.grid_ptr());
  for (int j = 0; j <= g.n2(); ++j) {
    const Stencil& s = st[j];
    double* out = r.row(j);
    for (int k = 0; k < s.count; ++k) {
      const double w = s.w[k];
      const double* in = f.row(s.first + k);
      for (int i = 0; i < n1; ++i) out[i] += w * in[i];
    }
  }
  return r;
}

ScalarField ddx2(const ScalarField& f) { return apply_x2(f.grid().d1(), f); }
ScalarField d2dx2(const ScalarField& f) { return apply_x2(f.grid().d2(), f); }
ScalarField ddx2_upwind(const ScalarField& f) { return apply_x2(f.grid().d1_up(), f); }

ScalarField laplacian(const ScalarField& f) { return ddx1x1(f) + d2dx2(f); }
VectorField laplacian(const VectorField& v) { return {laplacian(v.c1), laplacian(v.c2)}; }

double integrate(const ScalarField& f) {
  const auto& g = f.grid();
  const auto& w = g.weights();
  double total = 0;
  for (int j = 0; j <= g.n2(); ++j) {
    const double* r = f.row(j);
    double s = 0;
    for (int i = 0; i < g.n1(); ++i) s += r[i];
    total += w[j] * s;
  }
  return total * g.dx1();
}

double inner(const ScalarField& f, const ScalarField& h) {
  require_same_grid(f, h, "inner");
  const auto& g = f.grid();
  const auto& w = g.weights();
  double total = 0;
  for (int j = 0; j <= g.n2(); ++j) {
    const double* a = f.row(j);
    const double* b = h.row(j);
    double s = 0;
    for (int i = 0; i < g.n1(); ++i) s += a[i] * b[i];
    total += w[j] * s;
  }
  return total * g.dx1();
}

double inner(const VectorField& u, const VectorField& v) {
  return inner(u.c1, v.c1) + inner(u.c2, v.c2);
}

double l2_norm(const ScalarField& f) { return std::sqrt(std::max(0.0, inner(f, f))); }
double l2_norm(const VectorField& v) { return std::sqrt(std::max(0.0, inner(v, v))); }

double linf_norm(const ScalarField& f) {
  double m = 0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

double linf_norm(const VectorField& v) {
  double m = 0;
  for (std::size_t k = 0; k < v.c1.values().size(); ++k)
    m = std::max(m, std::hypot(v.c1.values()[k], v.c2.values()[k]));
  return m;
}

Gradient gradient(const VectorField& v) {
  Gradient g;
  for (int c = 0; c < 2; ++c) {
    g.g[c][0] = ddx1(v[c]);
    g.g[c][1] = ddx2(v[c]);
  }
  return g;
}

double inner(const Gradient& a, const Gradient& b) {
  double s = 0;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) s += inner(a.g[i][k], b.g[i][k]);
  return s;
}

void truncate_modes(SpectralField& s) {
  const auto& g = s.grid();
  const int cut = g.n1() / 3;
  for (int j = 0; j < g.rows(); ++j)
    for (int m = cut + 1; m < g.modes(); ++m) s(m, j) = cplx(0, 0);
}

ScalarField dealias(const ScalarField& f) {
  SpectralField s = to_spectral(f);
  truncate_modes(s);
  return to_physical(s);
}

VectorField advect(const VectorField& a, const VectorField& b) {
  VectorField r;
  for (int c = 0; c < 2; ++c) {
    ScalarField t = a.c1 * ddx1(b[c]);
    t += a.c2 * ddx2(b[c]);
    r[c] = dealias(t);
  }
  return r;
}

double mean(const ScalarField& f) {
  return integrate(f) / (f.grid().L() * f.grid().h());
}

}  // namespace vvl
