#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "vvl/compat.hpp"
#include "vvl/config.hpp"
#include "vvl/corrector.hpp"
#include "vvl/diagnostics.hpp"

namespace vvl {

constexpr const char* kToolVersion = "vvlimit 1.0.0";
constexpr int kCsvSchema = 1;

// Exit codes shared by all subcommands.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Grid for one viscosity: the layer rule when grid.n2 == 0, otherwise the
// configured grading. `refinements` applies refine_x2 that many times.
GridPtr grid_for(const RunConfig& c, double nu, int refinements = 0);

// Configured dt, or the CFL-derived one (see RunConfig::cfl).
double resolve_dt(const RunConfig& c, const ChannelGrid& g, const VectorField& v0);

struct SeriesRow {
  double t = 0;
  double vv_error = 0;  // ||u - ubar||_2
  double w_norm = 0;
  double z_norm = 0;
  bool has_budget = false;  // false at the first and last snapshot
  EnergyBudget budget;
};

struct RunResult {
  double nu = 0;
  int n2 = 0;
  double min_dx2 = 0;
  double dt = 0;
  LayerCheck layer;
  std::vector<SeriesRow> rows;
  double sup_error = 0;
  GronwallFit gronwall;
  double max_budget_residual = 0;  // max residual / dominant
  double trace_max = 0;            // max_t ||vbar1(t)||_inf on the outflow wall
  bool trace_below_threshold = true;
  NormTable corrector_norms;       // at the final snapshot
  double cond_0_residual = 0;
  double cond_minus1_residual = 0;
};

RunResult run_pair(const RunConfig& c, double nu, int refinements = 0);

struct SweepRow {
  double nu = 0;
  int n2 = 0;
  double min_dx2 = 0;
  double dt = 0;
  double sup_error = 0;
  double sup_error_refined = 0;
  double gate_change = 0;
  bool gate_passed = false;
  std::string failure;  // module error, if the run aborted
  double gronwall_C = 0;
  double max_budget_residual = 0;
  double trace_max = 0;
  NormTable corrector_norms;
};

struct SweepSummary {
  std::vector<SweepRow> rows;  // nu descending
  bool fit_ok = false;
  RateFit fit;
  double gronwall_ratio = 0;  // max C / min C over gated rows
  std::string config_hash;
};

// Independent runs per viscosity on `threads` workers; identical results for
// any thread count or ordering.
SweepSummary run_sweep(const RunConfig& c, const std::string& hash, int threads);

struct CorrectorStudyRow {
  double nu = 0;
  int n2 = 0;
  NormTable norms;
  double key_residual = 0;
  double key_residual_fd = 0;
  double key_scale = 0;
  double winf_ratio = 0;  // winf / (nu ||g||_inf)
  double w2_ratio = 0;    // w2 / (nu^{1/2} ||g||_inf)
  double layer_sup = 0;
  double layer_sup_expected = 0;  // 4 e^{-2} nu / U
};

struct CorrectorStudy {
  std::vector<CorrectorStudyRow> rows;
  std::map<std::string, double> slopes;
  double max_slope_deviation = 0;
  double winf_variation = 0;  // max / min over the sweep
  double w2_variation = 0;
  double max_key_ratio = 0;   // max key_residual / key_scale
  double max_layer_error = 0; // max relative error of layer_sup
};

// Layer grids finer than the solver's, for quadrature of the closed forms.
constexpr LayerRule kStudyRule{1.0 / 16.0, 1.03, 256};

// Trace g = sin(2 pi x1 / L) with dg/dt = cos(2 pi x1 / L).
CorrectorStudy corrector_study(const RunConfig& c, const std::vector<double>& nus);

struct CompatStudy {
  int n2 = 0;
  CompatReport report;
  double repaired_cond_0 = 0;
};

// Uniform grid with at least three nodes across the inflow collar.
CompatStudy compat_study(const RunConfig& c);

// Full initial velocity u0 = vbar0 + U.
VectorField full_initial_velocity(const VectorField& v0, const BackgroundFlow& bg);

std::string series_csv(const RunResult& r);
std::string sweep_csv(const SweepSummary& s);

// Subcommands write artifacts under c.output_dir and return an exit code.
// Errors are reported as one JSON object on `err`.
int cmd_run(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_corrector_study(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_compat_check(const RunConfig& c, std::ostream& out, std::ostream& err);

// {"error": ..., "kind": ..., "exit_code": ...}
std::string error_json(const std::string& kind, const std::string& message, int code);

}  // namespace vvl
