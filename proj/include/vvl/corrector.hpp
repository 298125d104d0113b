#pragma once

#include <map>
#include <string>
#include <vector>

#include "vvl/field.hpp"
#include "vvl/operators.hpp"
#include "vvl/vector_calculus.hpp"

namespace vvl {

// phi = 1 on [0, h/4], 0 on [h/2, h], smooth and monotone in between.
struct CutoffSpec {
  double h = 1.0;
  Jet eval(double x2) const;
  double phi(double x2) const { return eval(x2).f; }
  double phi_prime(double x2) const { return eval(x2).d1; }
  double phi_double_prime(double x2) const { return eval(x2).d2; }
};

struct CorrectorFields {
  GridPtr grid;
  double nu = 0;
  BackgroundFlow background;
  ScalarField psi;
  VectorField z, z_tilde, dz_dt;
  // grad[i][k] = d_k of component i.
  Gradient grad_z, grad_z_tilde;
  std::vector<double> trace;  // v1bar(x1, 0)
};

// Closed forms for psi, z~, z and their gradients. The x1 derivatives of the
// time-derivative trace are taken spectrally.
CorrectorFields eval_corrector(const BoundaryTrace& trace_v1, const BoundaryTrace& trace_v1_x1,
                               const BoundaryTrace& trace_v1_x1x1,
                               const BoundaryTrace& trace_dv1_dt, double nu,
                               const BackgroundFlow& background, const CutoffSpec& cutoff,
                               const GridPtr& grid);

// Convenience: derivatives of the trace taken spectrally here.
CorrectorFields eval_corrector(const std::vector<double>& trace,
                               const std::vector<double>& trace_dt, double nu,
                               const BackgroundFlow& background, const GridPtr& grid);

// max |nu d2 z~1 + U z~1| from the closed-form d2 z~1.
double key_cancellation_residual(const CorrectorFields& c);
// Same residual with d2 z~1 differenced on the grid.
double key_cancellation_residual_fd(const CorrectorFields& c);
// max|z~1| * U: the natural size of either term.
double key_cancellation_scale(const CorrectorFields& c);

using NormTable = std::map<std::string, double>;
extern const std::vector<std::string> kNormNames;
// Expected nu-exponents of each norm.
extern const std::map<std::string, double> kNormExponents;

NormTable corrector_norm_table(const CorrectorFields& c);

struct WeightedNorms {
  double winf = 0;  // || x2^2 d2 z1 ||_inf
  double w2 = 0;    // || x2 d2 z1 ||_2
};
WeightedNorms weighted_bound_check(const CorrectorFields& c, double trace_sup);

// Layer profile x2^2 (U/nu) e^{-U x2/nu} sampled at the grid nodes: max value.
double pure_layer_sup(const ChannelGrid& g, double nu, double U);
// Trapezoid value of int_0^h x2^2 e^{-2 U x2 / nu} dx2.
double pure_layer_integral(const ChannelGrid& g, double nu, double U);

// z . grad z from the closed-form gradient.
VectorField corrector_self_advection(const CorrectorFields& c);

}  // namespace vvl
