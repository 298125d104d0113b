#pragma once

#include <vector>

#include "vvl/banded.hpp"
#include "vvl/field.hpp"

namespace vvl {

// Per-mode system  sigma v - L v + grad p = rhs,  div v = 0,
// with L v = nu Lap v - a d1 v + U d2 v (transport by (a, -U)),
// v2 = 0 on both walls and v1 = 0 on walls flagged as fixed.
// Pressure sits at wall-normal cell centres and continuity is imposed per
// cell, so the cell divergence (see divergence()) of the result vanishes to
// solver precision. The returned pressure is interpolated to the nodes.
struct ConstrainedSpec {
  double sigma = 1.0;
  double nu = 0.0;
  double U = 0.0;
  double a = 0.0;
  bool fix_tangential_bottom = false;
  bool fix_tangential_top = false;
};

class ConstrainedSolver {
 public:
  ConstrainedSolver(GridPtr grid, ConstrainedSpec spec);

  const ConstrainedSpec& spec() const { return spec_; }
  const GridPtr& grid_ptr() const { return grid_; }

  void solve(const SpectralField& r1, const SpectralField& r2, SpectralField& v1,
             SpectralField& v2, SpectralField& p) const;
  void solve(const VectorField& rhs, VectorField& v, ScalarField* p = nullptr) const;

 private:
  GridPtr grid_;
  ConstrainedSpec spec_;
  std::vector<BandedLU> lu_;  // one per mode; empty for m = 0 and Nyquist
  BandedLU mean_lu_;
};

}  // namespace vvl
