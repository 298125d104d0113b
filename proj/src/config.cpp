#include "vvl/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "vvl/errors.hpp"

namespace vvl {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("config: " + what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0; }

json to_object(const RunConfig& c) {
  json j;
  j["geometry"] = {{"L", c.geometry.length_L}, {"h", c.geometry.height_h}};
  j["grid"] = {{"n1", c.grid.n1},
               {"n2", c.grid.n2},
               {"grading_ratio", c.grid.grading_ratio},
               {"max_cell", c.grid.max_cell}};
  j["background"] = {{"a", c.background.a}, {"U", c.background.U}};
  j["nu"] = c.nu;
  j["nu_list"] = c.nu_list;
  j["T_final"] = c.T_final;
  j["dt"] = c.dt;
  j["cfl"] = c.cfl;
  j["initial"] = {{"amplitude", c.initial.amplitude},
                  {"mode", c.initial.mode},
                  {"collar", c.initial.collar},
                  {"ramp_fraction", c.initial.ramp_fraction}};
  j["forcing"] = forcing_name(c.forcing);
  j["snapshot_stride"] = c.snapshot_stride;
  j["output_dir"] = c.output_dir;
  j["trace_threshold"] = c.trace_threshold;
  j["gate_tolerance"] = c.gate_tolerance;
  j["corrector_nu_list"] = c.corrector_nu_list;
  j["threads"] = c.threads;
  return j;
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    require(allowed.count(it.key()) > 0, "unknown key '" + where + it.key() + "'");
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

}  // namespace

const char* forcing_name(ForcingKind k) { return k == ForcingKind::Zero ? "zero" : "repaired"; }

void validate(const RunConfig& c) {
  validate(c.geometry);
  validate(c.background);
  require(c.grid.n1 >= 4 && c.grid.n1 % 2 == 0, "grid.n1 must be even and >= 4");
  require(c.grid.n2 == 0 || c.grid.n2 >= 8, "grid.n2 must be 0 (layer rule) or >= 8");
  require(std::isfinite(c.grid.grading_ratio) && c.grid.grading_ratio >= 1.0,
          "grid.grading_ratio must be >= 1");
  require(std::isfinite(c.grid.max_cell) && c.grid.max_cell >= 0, "grid.max_cell must be >= 0");
  require(finite_positive(c.nu), "nu must be positive");
  for (double nu : c.nu_list) require(finite_positive(nu), "nu_list entries must be positive");
  for (double nu : c.corrector_nu_list)
    require(finite_positive(nu), "corrector_nu_list entries must be positive");
  require(finite_positive(c.T_final), "T_final must be positive");
  require(std::isfinite(c.cfl) && c.cfl >= 0, "cfl must be >= 0");
  if (c.cfl == 0) {
    require(finite_positive(c.dt), "dt must be positive");
    const double n = c.T_final / c.dt;
    require(std::abs(n - std::round(n)) <= 1e-9 * std::max(1.0, n),
            "T_final must be an integer multiple of dt");
  }
  require(std::isfinite(c.initial.amplitude), "initial.amplitude must be finite");
  require(c.initial.mode >= 0, "initial.mode must be >= 0");
  require(c.initial.collar > 0 && c.initial.collar < 0.5 * c.geometry.height_h,
          "initial.collar must lie in (0, h/2)");
  require(c.initial.ramp_fraction > 0 && c.initial.ramp_fraction <= 1,
          "initial.ramp_fraction must lie in (0, 1]");
  require(c.snapshot_stride >= 1, "snapshot_stride must be >= 1");
  require(!c.output_dir.empty(), "output_dir must not be empty");
  require(finite_positive(c.trace_threshold), "trace_threshold must be positive");
  require(finite_positive(c.gate_tolerance), "gate_tolerance must be positive");
  require(c.threads >= 0, "threads must be >= 0");
}

std::string to_json(const RunConfig& c) { return to_object(c).dump(2); }

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  require(j.is_object(), "top level must be an object");
  reject_unknown(j,
                 {"geometry", "grid", "background", "nu", "nu_list", "T_final", "dt", "cfl",
                  "initial", "forcing", "snapshot_stride", "output_dir", "trace_threshold",
                  "gate_tolerance", "corrector_nu_list", "threads"},
                 "");
  RunConfig c;
  if (j.contains("geometry")) {
    const json& g = j["geometry"];
    reject_unknown(g, {"L", "h"}, "geometry.");
    read(g, "L", c.geometry.length_L);
    read(g, "h", c.geometry.height_h);
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, {"n1", "n2", "grading_ratio", "max_cell"}, "grid.");
    read(g, "n1", c.grid.n1);
    read(g, "n2", c.grid.n2);
    read(g, "grading_ratio", c.grid.grading_ratio);
    read(g, "max_cell", c.grid.max_cell);
  }
  if (j.contains("background")) {
    const json& b = j["background"];
    reject_unknown(b, {"a", "U"}, "background.");
    read(b, "a", c.background.a);
    read(b, "U", c.background.U);
  }
  read(j, "nu", c.nu);
  read(j, "nu_list", c.nu_list);
  read(j, "T_final", c.T_final);
  read(j, "dt", c.dt);
  read(j, "cfl", c.cfl);
  if (j.contains("initial")) {
    const json& i = j["initial"];
    reject_unknown(i, {"amplitude", "mode", "collar", "ramp_fraction"}, "initial.");
    read(i, "amplitude", c.initial.amplitude);
    read(i, "mode", c.initial.mode);
    read(i, "collar", c.initial.collar);
    read(i, "ramp_fraction", c.initial.ramp_fraction);
  }
  if (j.contains("forcing")) {
    std::string f;
    read(j, "forcing", f);
    if (f == "zero")
      c.forcing = ForcingKind::Zero;
    else if (f == "repaired")
      c.forcing = ForcingKind::Repaired;
    else
      throw ConfigError("config: forcing must be 'zero' or 'repaired'");
  }
  read(j, "snapshot_stride", c.snapshot_stride);
  read(j, "output_dir", c.output_dir);
  read(j, "trace_threshold", c.trace_threshold);
  read(j, "gate_tolerance", c.gate_tolerance);
  read(j, "corrector_nu_list", c.corrector_nu_list);
  read(j, "threads", c.threads);
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& c, const std::string& command) {
  json j = to_object(c);
  j.erase("output_dir");
  j.erase("threads");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(command + "\n" + j.dump())));
  return buf;
}

}  // namespace vvl
