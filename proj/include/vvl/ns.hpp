#pragma once

#include <vector>

#include "vvl/euler.hpp"

namespace vvl {

struct NSState {
  VectorField v;
  ScalarField p;
  double t = 0;
  double nu = 0;
  BackgroundFlow background;
  Forcing forcing;  // plus nu Lap U, which vanishes for constant U
};

class NSSolver {
 public:
  NSSolver(GridPtr grid, double nu, BackgroundFlow background, double dt, Forcing forcing = {},
           SolverOptions opts = {});

  const ChannelIntegrator& integrator() const { return integ_; }
  double dt() const { return integ_.dt(); }
  void step(NSState& s) const;

 private:
  ChannelIntegrator integ_;
};

NSState make_ns_state(VectorField v, double nu, BackgroundFlow background, Forcing forcing = {});
NSState ns_step(const NSState& state, double dt);

struct NSSnapshot {
  double t = 0;
  VectorField v;
};

std::vector<NSSnapshot> run_ns(const VectorField& initial, double nu,
                               const BackgroundFlow& background, const RunParams& params);

}  // namespace vvl
