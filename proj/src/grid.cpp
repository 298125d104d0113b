#include "vvl/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "vvl/errors.hpp"

namespace vvl {

namespace {

// FFTW planning is not thread-safe; execution with new-array functions is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

Stencil make_stencil(const std::vector<double>& x, int first, int count, int j,
                     int order) {
  Stencil s;
  s.first = first;
  s.count = count;
  std::vector<double> nodes(x.begin() + first, x.begin() + first + count);
  auto w = fd_weights(x[j], nodes, order);
  for (int k = 0; k < count; ++k) s.w[k] = w[k];
  return s;
}

}  // namespace

class FftPlans {
 public:
  FftPlans(int n1, int rows) : n1_(n1), rows_(rows) {
    const int nm = n1 / 2 + 1;
    std::vector<double> r(static_cast<std::size_t>(n1) * rows);
    std::vector<cplx> c(static_cast<std::size_t>(nm) * rows);
    auto* cc = reinterpret_cast<fftw_complex*>(c.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    int n[] = {n1};
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c_ = fftw_plan_many_dft_r2c(1, n, rows, r.data(), nullptr, 1, n1, cc,
                                  nullptr, 1, nm, flags);
    c2r_ = fftw_plan_many_dft_c2r(1, n, rows, cc, nullptr, 1, nm, r.data(),
                                  nullptr, 1, n1, flags);
    if (!r2c_ || !c2r_) throw NumericalError("FFTW planning failed");
  }
  ~FftPlans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(r2c_);
    fftw_destroy_plan(c2r_);
  }

  void forward(const double* in, cplx* out) const {
    fftw_execute_dft_r2c(r2c_, const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    const double s = 1.0 / n1_;
    const std::size_t n = static_cast<std::size_t>(n1_ / 2 + 1) * rows_;
    for (std::size_t k = 0; k < n; ++k) out[k] *= s;
  }

  void inverse(const cplx* in, double* out) const {
    // c2r overwrites its input.
    std::vector<cplx> scratch(in, in + static_cast<std::size_t>(n1_ / 2 + 1) * rows_);
    fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(scratch.data()), out);
  }

 private:
  int n1_, rows_;
  fftw_plan r2c_ = nullptr;
  fftw_plan c2r_ = nullptr;
};

void validate(const ChannelGeometry& g) {
  if (!(g.length_L > 0) || !(g.height_h > 0))
    throw ConfigError("geometry: L and h must be positive");
}

void validate(const BackgroundFlow& b) {
  if (!(b.U > 0)) throw ConfigError("background: U must be positive");
  if (!std::isfinite(b.a)) throw ConfigError("background: a must be finite");
}

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int m) {
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

ChannelGrid::ChannelGrid(ChannelGeometry geometry, int n1, std::vector<double> x2_nodes,
                         double grading_ratio, double max_cell)
    : geometry_(geometry), n1_(n1), x2_(std::move(x2_nodes)), ratio_(grading_ratio),
      max_cell_(max_cell) {
  validate(geometry_);
  if (n1_ < 4 || n1_ % 2 != 0) throw ConfigError("grid: n1 must be even and >= 4");
  const int n = n2();
  if (n < 3) throw ConfigError("grid: need at least 4 wall-normal nodes");
  for (int j = 0; j < n; ++j)
    if (!(x2_[j + 1] > x2_[j])) throw ConfigError("grid: x2 nodes must increase");

  d1_.resize(n + 1);
  d2_.resize(n + 1);
  up_.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    if (j == 0) {
      d1_[j] = make_stencil(x2_, 0, 3, j, 1);
      d2_[j] = make_stencil(x2_, 0, 4, j, 2);
      up_[j] = make_stencil(x2_, 0, 3, j, 1);
    } else if (j == n) {
      d1_[j] = make_stencil(x2_, n - 2, 3, j, 1);
      d2_[j] = make_stencil(x2_, n - 3, 4, j, 2);
      up_[j] = make_stencil(x2_, n - 2, 3, j, 1);
    } else {
      d1_[j] = make_stencil(x2_, j - 1, 3, j, 1);
      d2_[j] = make_stencil(x2_, j - 1, 3, j, 2);
      up_[j] = (j + 2 <= n) ? make_stencil(x2_, j - 1, 4, j, 1)
                            : make_stencil(x2_, j - 1, 3, j, 1);
    }
  }

  wq_.assign(n + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    const double dx = x2_[j + 1] - x2_[j];
    wq_[j] += 0.5 * dx;
    wq_[j + 1] += 0.5 * dx;
  }
  c2n_.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    const int c = std::clamp(j - 1, 0, n - 2);
    const double xa = x2_center(c), xb = x2_center(c + 1);
    Stencil& s = c2n_[j];
    s.first = c;
    s.count = 2;
    s.w[0] = (xb - x2_[j]) / (xb - xa);
    s.w[1] = (x2_[j] - xa) / (xb - xa);
  }
  plans_ = std::make_unique<FftPlans>(n1_, n + 1);
}

ChannelGrid::~ChannelGrid() = default;

double ChannelGrid::min_dx2() const {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n2(); ++j) m = std::min(m, x2_[j + 1] - x2_[j]);
  return m;
}

double ChannelGrid::wavenumber(int m) const {
  return 2.0 * std::numbers::pi * m / L();
}

void ChannelGrid::forward(const double* in, cplx* out) const { plans_->forward(in, out); }
void ChannelGrid::inverse(const cplx* in, double* out) const { plans_->inverse(in, out); }

namespace {

double capped_sum(double d, double r, double cap, int n) {
  double s = 0, c = d;
  for (int j = 0; j < n; ++j) {
    s += (cap > 0) ? std::min(c, cap) : c;
    c *= r;
  }
  return s;
}

}  // namespace

GridPtr build_grid(const ChannelGeometry& geometry, int n1, int n2, double grading_ratio,
                   double max_cell) {
  validate(geometry);
  if (n1 < 4 || n1 % 2 != 0) throw ConfigError("grid: n1 must be even and >= 4");
  if (n2 < 8) throw ConfigError("grid: n2 must be >= 8");
  if (!(grading_ratio >= 1.0)) throw ConfigError("grid: grading_ratio must be >= 1");
  const double h = geometry.height_h;
  const double r = grading_ratio;
  if (max_cell > 0 && max_cell * n2 < h * (1 - 1e-12))
    throw ConfigError("grid: max_cell * n2 < h");

  double d;
  if (r == 1.0) {
    d = h / n2;
  } else if (max_cell <= 0 || capped_sum(h * (r - 1) / (std::pow(r, n2) - 1), r, max_cell, n2) >= h) {
    d = h * (r - 1) / (std::pow(r, n2) - 1);
  } else {
    // The capped sum is increasing in d; bisect.
    double lo = h * (r - 1) / (std::pow(r, n2) - 1), hi = h / n2;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (capped_sum(mid, r, max_cell, n2) < h ? lo : hi) = mid;
    }
    d = hi;
  }
  std::vector<double> x(n2 + 1, 0.0);
  double c = d;
  for (int j = 0; j < n2; ++j) {
    x[j + 1] = x[j] + ((max_cell > 0) ? std::min(c, max_cell) : c);
    c *= r;
  }
  x[n2] = h;
  return std::make_shared<const ChannelGrid>(geometry, n1, std::move(x), r, max_cell);
}

LayerCheck check_layer_resolution(const ChannelGrid& g, double nu, double U) {
  LayerCheck c;
  c.min_cell = g.min_dx2();
  c.required_min_cell = nu / (2 * U);
  const double edge = 3 * nu / U;
  for (int j = 0; j <= g.n2(); ++j)
    if (g.x2(j) <= edge) ++c.nodes_in_layer;
  c.ok = c.min_cell <= c.required_min_cell && c.nodes_in_layer >= c.required_nodes;
  return c;
}

GridPtr build_layer_grid(const ChannelGeometry& geometry, int n1, double nu, double U,
                         const LayerRule& rule) {
  validate(geometry);
  if (!(nu > 0) || !(U > 0)) throw ConfigError("layer grid: nu and U must be positive");
  const double h = geometry.height_h;
  const double cap = h / rule.cap_cells;
  const double d = rule.first_cell_fraction * nu / U;
  if (d >= cap) return build_grid(geometry, n1, std::max(8, rule.cap_cells), 1.0);
  int n = 0;
  double s = 0, c = d;
  while (s < h) {
    s += std::min(c, cap);
    c *= rule.growth;
    ++n;
  }
  return build_grid(geometry, n1, std::max(n, 8), rule.growth, cap);
}

GridPtr refine_x2(const ChannelGrid& g) {
  const double cap = g.max_cell() > 0 ? 0.5 * g.max_cell() : 0.0;
  return build_grid(g.geometry(), g.n1(), 2 * g.n2(), std::sqrt(g.grading_ratio()), cap);
}

}  // namespace vvl
