#pragma once

#include <functional>
#include <vector>

#include "vvl/grid.hpp"

namespace vvl {

// Samples at (x1 node i, x2 node j), stored row-major with index j*n1 + i.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, double value = 0.0);

  const GridPtr& grid_ptr() const { return grid_; }
  const ChannelGrid& grid() const { return *grid_; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }
  double* row(int j) { return v_.data() + static_cast<std::size_t>(j) * grid_->n1(); }
  const double* row(int j) const {
    return v_.data() + static_cast<std::size_t>(j) * grid_->n1();
  }
  double& operator()(int i, int j) { return v_[static_cast<std::size_t>(j) * grid_->n1() + i]; }
  double operator()(int i, int j) const {
    return v_[static_cast<std::size_t>(j) * grid_->n1() + i];
  }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

 private:
  GridPtr grid_;
  std::vector<double> v_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
ScalarField operator*(const ScalarField& a, const ScalarField& b);  // pointwise

ScalarField sample(const GridPtr& grid, const std::function<double(double, double)>& f);

struct VectorField {
  ScalarField c1, c2;

  VectorField() = default;
  explicit VectorField(GridPtr grid, double v1 = 0.0, double v2 = 0.0)
      : c1(grid, v1), c2(std::move(grid), v2) {}
  VectorField(ScalarField a, ScalarField b) : c1(std::move(a)), c2(std::move(b)) {}

  const ChannelGrid& grid() const { return c1.grid(); }
  const GridPtr& grid_ptr() const { return c1.grid_ptr(); }
  ScalarField& operator[](int k) { return k == 0 ? c1 : c2; }
  const ScalarField& operator[](int k) const { return k == 0 ? c1 : c2; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

// Row-wise Fourier coefficients, index j*modes + m.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(GridPtr grid);

  const ChannelGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  cplx& operator()(int m, int j) { return c_[static_cast<std::size_t>(j) * grid_->modes() + m]; }
  cplx operator()(int m, int j) const {
    return c_[static_cast<std::size_t>(j) * grid_->modes() + m];
  }
  std::vector<cplx>& data() { return c_; }
  const std::vector<cplx>& data() const { return c_; }

 private:
  GridPtr grid_;
  std::vector<cplx> c_;
};

SpectralField to_spectral(const ScalarField& f);
ScalarField to_physical(const SpectralField& s);

bool same_grid(const ScalarField& a, const ScalarField& b);
void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what);

}  // namespace vvl
