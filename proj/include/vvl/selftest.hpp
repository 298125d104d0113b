#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vvl/poisson.hpp"

namespace vvl {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  double value = 0;
  double tolerance = 0;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  double seconds = 0;
  bool all_passed() const;
};

// Manufactured solutions on uniform x2 grids n2 = 16, 32, 64.
struct MmsStudy {
  std::vector<int> n2;
  std::vector<double> errors;  // L2 velocity error at the final time
  std::vector<double> ratios;  // errors[k] / errors[k+1]
};

// Navier-Stokes: psi = sin(x1) x2^2 (h - x2)^2 (no-slip on both walls).
MmsStudy ns_mms_study();
// Euler: psi = sin(x1) x2 (h - x2)^2 (slip on the outflow wall, v1 = 0 on inflow).
MmsStudy euler_mms_study();

// Decay rate of v1 = sin(pi x2 / h) under viscosity alone, relative to nu pi^2 / h^2.
struct StokesDecay {
  double measured_rate = 0;
  double exact_rate = 0;
  double relative_error = 0;
};
StokesDecay stokes_decay_study();

// Dense reference for the Neumann Poisson problem: the x1 operator is
// assembled from an explicit DFT sum, the system is bordered with the
// zero-mean constraint and solved by LU. Small grids only.
ScalarField dense_neumann_poisson(const ScalarField& rhs, const PoissonBC& bc);

SelftestReport run_selftest();
// Prints one line per check; exit 0 when all pass, 3 otherwise.
int cmd_selftest(std::ostream& out, std::ostream& err);

}  // namespace vvl
