#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vvl/grid.hpp"
#include "vvl/vector_calculus.hpp"

namespace vvl {

enum class ForcingKind { Zero, Repaired };

struct GridConfig {
  int n1 = 32;
  // n2 = 0 selects the layer rule for each viscosity.
  int n2 = 0;
  double grading_ratio = 1.06;
  double max_cell = 0.0;
};

struct RunConfig {
  ChannelGeometry geometry{16.0, 8.0};
  GridConfig grid;
  BackgroundFlow background{0.0, 4.0};
  double nu = 1e-2;
  std::vector<double> nu_list{2e-2, 1e-2, 5e-3, 2.5e-3};
  double T_final = 0.5;
  double dt = 2.5e-3;
  // cfl > 0 replaces dt by the largest T_final / N below the advective limit
  // cfl * min(dx1 / max|v1|, min dx2 / max|v2|) of the homogenized initial
  // data. The background transport is implicit and does not enter.
  double cfl = 0.0;
  InitialDataSpec initial;
  ForcingKind forcing = ForcingKind::Zero;
  int snapshot_stride = 4;
  std::string output_dir = "out";
  // Stand-in for the short-time hypothesis: flag runs whose outflow trace
  // max |vbar1| exceeds this value.
  double trace_threshold = 0.1;
  // Sweep acceptance: doubling n2 may change sup error by at most this.
  double gate_tolerance = 0.10;
  std::vector<double> corrector_nu_list{1e-1, 1e-2, 1e-3, 1e-4};
  // Worker threads for sweeps (0 = hardware concurrency). Never changes results.
  int threads = 0;
};

// Throws ConfigError on the first invalid field.
void validate(const RunConfig& c);

std::string to_json(const RunConfig& c);
// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);
// Hash of the command name and every result-affecting field (output_dir and
// threads are excluded), as 16 hex digits.
std::string config_hash(const RunConfig& c, const std::string& command);

const char* forcing_name(ForcingKind k);

}  // namespace vvl
