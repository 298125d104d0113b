#include "vvl/field.hpp"

#include <string>

#include "vvl/errors.hpp"

namespace vvl {

ScalarField::ScalarField(GridPtr grid, double value)
    : grid_(std::move(grid)), v_(grid_->size(), value) {}

bool same_grid(const ScalarField& a, const ScalarField& b) {
  return a.grid_ptr() == b.grid_ptr();
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what) {
  if (!same_grid(a, b)) throw ConfigError(std::string(what) + ": fields live on different grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(*this, o, "operator+=");
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(*this, o, "operator-=");
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (auto& x : v_) x *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b, "product");
  ScalarField r(a.grid_ptr());
  for (std::size_t k = 0; k < r.values().size(); ++k)
    r.values()[k] = a.values()[k] * b.values()[k];
  return r;
}

ScalarField sample(const GridPtr& grid, const std::function<double(double, double)>& f) {
  ScalarField r(grid);
  for (int j = 0; j <= grid->n2(); ++j)
    for (int i = 0; i < grid->n1(); ++i) r(i, j) = f(grid->x1(i), grid->x2(j));
  return r;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  c1 += o.c1;
  c2 += o.c2;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  c1 -= o.c1;
  c2 -= o.c2;
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  c1 *= s;
  c2 *= s;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

SpectralField::SpectralField(GridPtr grid)
    : grid_(std::move(grid)),
      c_(static_cast<std::size_t>(grid_->modes()) * grid_->rows(), cplx(0, 0)) {}

SpectralField to_spectral(const ScalarField& f) {
  SpectralField s(f.grid_ptr());
  f.grid().forward(f.values().data(), s.data().data());
  return s;
}

ScalarField to_physical(const SpectralField& s) {
  ScalarField f(s.grid_ptr());
  s.grid().inverse(s.data().data(), f.values().data());
  return f;
}

}  // namespace vvl
