#pragma once

#include <vector>

#include "vvl/field.hpp"

namespace vvl {

enum class BcKind { Neumann, Dirichlet };

// Wall data sampled at the n1 x1 nodes: d p/d x2 (Neumann) or p (Dirichlet).
// Empty vectors mean homogeneous data.
struct PoissonBC {
  BcKind kind = BcKind::Neumann;
  std::vector<double> bottom;
  std::vector<double> top;
};

struct PoissonResult {
  ScalarField p;
  // Relative Neumann compatibility defect removed from the mean mode.
  double compat_defect = 0;
  // ||A p - b|| / ||b|| on the discrete operator.
  double residual = 0;
};

// Neumann solutions are returned with zero mean. Data whose relative
// compatibility defect exceeds compat_tol is rejected, unless the absolute
// defect is below compat_floor (round-off in data that should vanish).
PoissonResult poisson_solve(const ScalarField& rhs, const PoissonBC& bc,
                            double compat_tol = 1e-3, double compat_floor = 0.0);

// Discrete operator: interior rows are the 3-point Laplacian; wall rows carry
// the half-cell Neumann closure or the Dirichlet identity.
ScalarField apply_poisson_operator(const ScalarField& p, const PoissonBC& bc);
// Right-hand side the operator is matched against (rhs, with Dirichlet wall
// rows replaced by the data).
ScalarField poisson_target(const ScalarField& rhs, const PoissonBC& bc);

}  // namespace vvl
