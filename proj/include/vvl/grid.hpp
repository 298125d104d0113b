#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace vvl {

using cplx = std::complex<double>;

struct ChannelGeometry {
  double length_L = 1.0;
  double height_h = 1.0;
};

// Background flow (a, -U); U > 0 means downward flow, inflow at x2 = h.
struct BackgroundFlow {
  double a = 0.0;
  double U = 1.0;
};

void validate(const ChannelGeometry& g);
void validate(const BackgroundFlow& b);

// Finite-difference stencil anchored at node `first`.
struct Stencil {
  int first = 0;
  int count = 0;
  double w[4] = {0, 0, 0, 0};
};

// Weights for the m-th derivative at x0 from the given nodes (Fornberg).
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int m);

class FftPlans;

class ChannelGrid {
 public:
  ChannelGrid(ChannelGeometry geometry, int n1, std::vector<double> x2_nodes,
              double grading_ratio, double max_cell = 0.0);
  ~ChannelGrid();
  ChannelGrid(const ChannelGrid&) = delete;
  ChannelGrid& operator=(const ChannelGrid&) = delete;

  const ChannelGeometry& geometry() const { return geometry_; }
  double L() const { return geometry_.length_L; }
  double h() const { return geometry_.height_h; }
  int n1() const { return n1_; }
  int n2() const { return static_cast<int>(x2_.size()) - 1; }
  int rows() const { return static_cast<int>(x2_.size()); }
  int modes() const { return n1_ / 2 + 1; }
  std::size_t size() const { return static_cast<std::size_t>(n1_) * x2_.size(); }
  double grading_ratio() const { return ratio_; }
  double max_cell() const { return max_cell_; }

  double dx1() const { return L() / n1_; }
  double x1(int i) const { return i * dx1(); }
  double x2(int j) const { return x2_[j]; }
  const std::vector<double>& x2_nodes() const { return x2_; }
  double min_dx2() const;
  // Wavenumber 2*pi*m/L of mode m in [0, n1/2].
  double wavenumber(int m) const;

  // Centered interior, one-sided second-order at walls.
  const std::vector<Stencil>& d1() const { return d1_; }
  // Three-point interior, four-point one-sided at walls.
  const std::vector<Stencil>& d2() const { return d2_; }
  // First derivative biased toward larger x2 (upwind for downward flow).
  const std::vector<Stencil>& d1_up() const { return up_; }
  // Trapezoid weights in x2.
  const std::vector<double>& weights() const { return wq_; }

  // Cell centres (x2_j + x2_{j+1})/2, j < n2. Pressure lives here.
  double x2_center(int j) const { return 0.5 * (x2_[j] + x2_[j + 1]); }
  // Linear interpolation from cell centres to node j (extrapolation at walls).
  const Stencil& center_to_node(int j) const { return c2n_[j]; }

  // Row-wise real <-> complex transforms. Coefficients are normalized so that
  // f(x) = sum_m c_m e^{ik_m x} with the conjugate half implied.
  void forward(const double* in, cplx* out) const;
  void inverse(const cplx* in, double* out) const;

 private:
  ChannelGeometry geometry_;
  int n1_;
  std::vector<double> x2_;
  double ratio_;
  double max_cell_;
  std::vector<Stencil> d1_, d2_, up_;
  std::vector<double> wq_;
  std::vector<Stencil> c2n_;
  std::unique_ptr<FftPlans> plans_;
};

using GridPtr = std::shared_ptr<const ChannelGrid>;

// Geometric grading with per-cell ratio r, optionally capped at max_cell
// (max_cell <= 0 means no cap).
GridPtr build_grid(const ChannelGeometry& geometry, int n1, int n2,
                   double grading_ratio, double max_cell = 0.0);

// Wall-normal spacing rules tied to the outflow layer of width nu/U.
struct LayerRule {
  double first_cell_fraction = 0.125;  // first cell = fraction * nu/U
  double growth = 1.06;
  int cap_cells = 64;                  // max cell = h / cap_cells
};

struct LayerCheck {
  bool ok = false;
  double min_cell = 0;
  double required_min_cell = 0;
  int nodes_in_layer = 0;
  int required_nodes = 6;
};

// Smallest cell <= nu/(2U) and at least six nodes in x2 <= 3 nu/U.
LayerCheck check_layer_resolution(const ChannelGrid& g, double nu, double U);

GridPtr build_layer_grid(const ChannelGeometry& geometry, int n1, double nu,
                         double U, const LayerRule& rule = {});

// Same geometry with n2 doubled, ratio square-rooted, cap halved.
GridPtr refine_x2(const ChannelGrid& g);

}  // namespace vvl
