#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "vvl/corrector.hpp"
#include "vvl/euler.hpp"
#include "vvl/ns.hpp"

namespace vvl {

struct CorrectedDifference {
  VectorField w_tilde;  // v - vbar
  VectorField w;        // v - vbar - z
};

CorrectedDifference corrected_difference(const VectorField& v, const VectorField& v_bar,
                                         const VectorField& z);

// x2 derivative that is summation-by-parts with respect to the trapezoid
// weights: centered (f_{j+1} - f_{j-1}) / (x_{j+1} - x_{j-1}) inside, one-sided
// first order at the walls. sum_j H_j (f Dg + g Df)_j = [f g] at the walls.
ScalarField ddx2_sbp(const ScalarField& f);
// Spectral d1, summation-by-parts d2.
Gradient sbp_gradient(const VectorField& v);

// Paired solver data at one instant; z is the corrector built from vbar.
struct PairedSnapshot {
  double t = 0;
  VectorField v;      // NS, homogenized
  VectorField v_bar;  // Euler, homogenized
  VectorField z;
};

constexpr int kBudgetTerms = 9;
extern const std::array<std::string, kBudgetTerms> kBudgetTermNames;
enum BudgetTerm {
  kViscCross = 0,
  kViscEuler,
  kViscBg,
  kTransport,
  kStretch,
  kNonlinear,
  kCorrectorDt,
  kCorrectorAdv,
  kCorrectorStretch
};

struct EnergyBudget {
  double t = 0;
  double lhs_dwdt = 0;  // 1/2 d/dt ||w||^2, centered in time
  double lhs_visc = 0;  // nu ||grad w||^2
  std::array<double, kBudgetTerms> terms{};
  double I_combined = 0;  // visc_cross + corrector_adv
  double I_direct = 0;    // -(nu grad z - z (x) U, grad w)
  double I_scale = 0;     // (nu ||grad z|| + |U| ||z||) ||grad w||
  double residual = 0;    // |lhs_dwdt + lhs_visc - sum terms|
  double dominant = 0;    // max(|lhs_dwdt| + lhs_visc, sum |terms|)

  double nonlinear_split = 0;  // six-term assembly of the nonlinear term
  double nonlinear_scale = 0;  // |(v . grad v, w)| + |(vbar . grad vbar, w)|
  double nl1 = 0;              // (v . grad w, w)
  double nl1_scale = 0;        // ||v||_inf ||grad w|| ||w||
  double transport_scale = 0;  // |U| ||grad w|| ||w||

  // Tangential background drift a: two periodic integrations by parts.
  double drift_z_lhs = 0, drift_z_rhs = 0;    // (a z1, d1 w1) vs (-a d1 z1, w1)
  double drift_zt_lhs = 0, drift_zt_rhs = 0;  // same with z~ (the layer piece)
  double drift_z_scale = 0, drift_zt_scale = 0;  // |a| ||z1|| ||d1 w1|| and with z~1

  // (w2 d2 z1, w1) and its Hardy-weighted bound C_H^2 ||x2^2 d2 z1||_inf ||grad w||^2.
  double hardy_term = 0;
  double hardy_bound = 0;

  double w_norm = 0, grad_w_norm = 0, z_norm = 0, w_tilde_norm = 0;
};

struct BudgetOptions {
  // Test fixture: negate one budget term after assembly (-1 = none).
  int mutate_term = -1;
};

constexpr double kHardyConstant = 2.0;

// Budget at the middle snapshot. The corrector must be the one built at cur.t.
EnergyBudget energy_budget(const PairedSnapshot& prev, const PairedSnapshot& cur,
                           const PairedSnapshot& next, const CorrectorFields& corrector,
                           const BackgroundFlow& background, double nu,
                           const BudgetOptions& options = {});

// ||f / x2|| / ||grad f|| for f vanishing on x2 = 0.
double hardy_ratio(const ScalarField& f);

struct ErrorSeries {
  std::vector<std::pair<double, double>> points;  // (t, ||u - ubar||)
  double sup = 0;
};

ErrorSeries vv_error_series(const std::vector<NSSnapshot>& ns,
                            const std::vector<EulerSnapshot>& euler);

struct RateFit {
  std::vector<double> nus, errors;
  double slope = 0, intercept = 0, r_squared = 0;
  std::vector<double> pair_slopes;  // between neighbours in the given order
};

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs);

struct GronwallFit {
  double C = 0;
  double max_ratio = 0;  // max_t ||w|| / envelope(C); 1 at the binding time
  double binding_t = 0;
};

// Smallest C with ||w(t)|| <= C nu^{1/2} t^{1/2} e^{C t / 2} at every sample.
GronwallFit gronwall_envelope(const std::vector<std::pair<double, double>>& series, double nu);

}  // namespace vvl
