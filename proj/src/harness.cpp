#include "vvl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <ostream>
#include <thread>

#include "vvl/errors.hpp"
#include "vvl/operators.hpp"

namespace vvl {

using nlohmann::json;

GridPtr grid_for(const RunConfig& c, double nu, int refinements) {
  GridPtr g = c.grid.n2 == 0
                  ? build_layer_grid(c.geometry, c.grid.n1, nu, c.background.U)
                  : build_grid(c.geometry, c.grid.n1, c.grid.n2, c.grid.grading_ratio,
                               c.grid.max_cell);
  for (int r = 0; r < refinements; ++r) g = refine_x2(*g);
  return g;
}

double resolve_dt(const RunConfig& c, const ChannelGrid& g, const VectorField& v0) {
  if (c.cfl == 0) return c.dt;
  // Background transport is implicit, so only the homogenized velocity limits dt.
  const double u1 = linf_norm(v0.c1), u2 = linf_norm(v0.c2);
  double limit = std::numeric_limits<double>::infinity();
  if (u1 > 0) limit = std::min(limit, g.dx1() / u1);
  if (u2 > 0) limit = std::min(limit, g.min_dx2() / u2);
  if (!std::isfinite(limit)) return c.T_final;
  const double n = std::ceil(c.T_final / (c.cfl * limit) - 1e-12);
  return c.T_final / std::max(1.0, n);
}

VectorField full_initial_velocity(const VectorField& v0, const BackgroundFlow& bg) {
  VectorField u0 = v0;
  u0.c1 += ScalarField(v0.c1.grid_ptr(), bg.a);
  u0.c2 += ScalarField(v0.c1.grid_ptr(), -bg.U);
  return u0;
}

namespace {

double trace_sup(const std::vector<double>& t) {
  double m = 0;
  for (double x : t) m = std::max(m, std::abs(x));
  return m;
}

RunResult run_pair_impl(const RunConfig& c, double nu, int refinements, bool diagnostics) {
  RunResult r;
  r.nu = nu;
  const GridPtr g = grid_for(c, nu, refinements);
  r.n2 = g->n2();
  r.min_dx2 = g->min_dx2();
  r.layer = check_layer_resolution(*g, nu, c.background.U);
  const BackgroundFlow& bg = c.background;

  const VectorField v0 = make_initial_data(g, c.initial);
  r.dt = resolve_dt(c, *g, v0);
  const VectorField u0 = full_initial_velocity(v0, bg);

  RunParams params;
  params.dt = r.dt;
  params.T = c.T_final;
  params.snapshot_stride = c.snapshot_stride;
  VectorField f0;
  if (c.forcing == ForcingKind::Repaired) {
    f0 = repaired_forcing(solve_p0(u0, VectorField{}, bg));
    params.forcing = [f0](double) { return f0; };
  }
  if (diagnostics) {
    const CompatReport compat = check_compat(u0, f0, bg);
    r.cond_0_residual = compat.cond_0_residual;
    r.cond_minus1_residual = compat.cond_minus1_residual;
  }

  const auto euler = run_euler(v0, bg, params);
  const auto ns = run_ns(v0, nu, bg, params);
  const ErrorSeries err = vv_error_series(ns, euler);
  r.sup_error = err.sup;
  for (const auto& s : euler) r.trace_max = std::max(r.trace_max, trace_sup(s.trace));
  r.trace_below_threshold = r.trace_max <= c.trace_threshold;
  if (!diagnostics) return r;

  const std::size_t n = euler.size();
  std::vector<CorrectorFields> corr;
  std::vector<PairedSnapshot> snaps;
  corr.reserve(n);
  snaps.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    corr.push_back(eval_corrector(euler[k].trace, euler[k].trace_dt, nu, bg, g));
    snaps.push_back({euler[k].t, ns[k].v, euler[k].v_bar, corr.back().z});
  }
  std::vector<std::pair<double, double>> w_series;
  r.rows.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    SeriesRow& row = r.rows[k];
    row.t = euler[k].t;
    row.vv_error = err.points[k].second;
    row.w_norm = l2_norm(corrected_difference(ns[k].v, euler[k].v_bar, corr[k].z).w);
    row.z_norm = l2_norm(corr[k].z);
    w_series.emplace_back(row.t, row.w_norm);
    if (k > 0 && k + 1 < n) {
      row.has_budget = true;
      row.budget = energy_budget(snaps[k - 1], snaps[k], snaps[k + 1], corr[k], bg, nu);
      if (row.budget.dominant > 0)
        r.max_budget_residual =
            std::max(r.max_budget_residual, row.budget.residual / row.budget.dominant);
    }
  }
  r.gronwall = gronwall_envelope(w_series, nu);
  if (g->min_dx2() <= nu / (2.0 * bg.U)) r.corrector_norms = corrector_norm_table(corr.back());
  return r;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json norms_json(const NormTable& t) {
  json j = json::object();
  for (const auto& [k, v] : t) j[k] = v;
  return j;
}

json layer_json(const LayerCheck& l) {
  return {{"ok", l.ok},
          {"min_cell", l.min_cell},
          {"required_min_cell", l.required_min_cell},
          {"nodes_in_layer", l.nodes_in_layer},
          {"required_nodes", l.required_nodes}};
}

json provenance(const RunConfig& c, const std::string& command, const std::string& hash) {
  return {{"config_hash", hash},
          {"tool_version", kToolVersion},
          {"command", command},
          {"config", json::parse(to_json(c))}};
}

std::filesystem::path artifact(const RunConfig& c, const std::string& stem,
                               const std::string& hash, const char* ext) {
  std::filesystem::create_directories(c.output_dir);
  return std::filesystem::path(c.output_dir) / (stem + "_" + hash + ext);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

// Runs f, mapping module errors to exit codes and error JSON.
template <class F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    err << error_json("config", e.what(), kExitConfig) << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << error_json("numerical", e.what(), kExitNumerical) << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << error_json("config", e.what(), kExitConfig) << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << error_json("numerical", e.what(), kExitNumerical) << "\n";
    return kExitNumerical;
  }
}

}  // namespace

RunResult run_pair(const RunConfig& c, double nu, int refinements) {
  validate(c);
  return run_pair_impl(c, nu, refinements, true);
}

SweepSummary run_sweep(const RunConfig& c, const std::string& hash, int threads) {
  validate(c);
  if (c.nu_list.size() < 3) throw ConfigError("sweep: nu_list needs at least 3 viscosities");
  std::vector<double> nus = c.nu_list;
  std::sort(nus.begin(), nus.end(), std::greater<>());
  if (std::adjacent_find(nus.begin(), nus.end()) != nus.end())
    throw ConfigError("sweep: nu_list entries must be distinct");

  // Job 2k is the base run for nus[k], job 2k+1 its x2-refined twin.
  const std::size_t jobs = 2 * nus.size();
  std::vector<RunResult> results(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs;) {
      try {
        results[j] = run_pair_impl(c, nus[j / 2], static_cast<int>(j % 2), j % 2 == 0);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, static_cast<int>(jobs));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepSummary s;
  s.config_hash = hash;
  std::vector<std::pair<double, double>> fit_points;
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0;
  for (std::size_t k = 0; k < nus.size(); ++k) {
    SweepRow row;
    row.nu = nus[k];
    for (std::size_t j = 2 * k; j < 2 * k + 2; ++j) {
      if (!errors[j]) continue;
      try {
        std::rethrow_exception(errors[j]);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        if (row.failure.empty()) row.failure = e.what();
      }
    }
    const RunResult& base = results[2 * k];
    const RunResult& fine = results[2 * k + 1];
    row.n2 = base.n2;
    row.min_dx2 = base.min_dx2;
    row.dt = base.dt;
    row.sup_error = base.sup_error;
    row.sup_error_refined = fine.sup_error;
    row.gronwall_C = base.gronwall.C;
    row.max_budget_residual = base.max_budget_residual;
    row.trace_max = base.trace_max;
    row.corrector_norms = base.corrector_norms;
    if (row.failure.empty()) {
      const double ref = std::max(std::abs(fine.sup_error), std::numeric_limits<double>::min());
      row.gate_change = std::abs(fine.sup_error - base.sup_error) / ref;
      row.gate_passed =
          base.layer.ok && row.gate_change <= c.gate_tolerance && base.sup_error > 0;
      if (!base.layer.ok) row.failure = "outflow layer under-resolved";
      else if (!row.gate_passed) row.failure = "refinement changes sup error beyond tolerance";
    }
    if (row.gate_passed) {
      fit_points.emplace_back(row.nu, row.sup_error);
      cmin = std::min(cmin, row.gronwall_C);
      cmax = std::max(cmax, row.gronwall_C);
    }
    s.rows.push_back(std::move(row));
  }
  if (fit_points.size() >= 3) {
    s.fit = fit_rate(fit_points);
    s.fit_ok = true;
    s.gronwall_ratio = cmin > 0 ? cmax / cmin : std::numeric_limits<double>::infinity();
  }
  return s;
}

CorrectorStudy corrector_study(const RunConfig& c, const std::vector<double>& nus) {
  validate(c);
  if (nus.size() < 3) throw ConfigError("corrector-study: need at least 3 viscosities");
  const double U = c.background.U, L = c.geometry.length_L;
  CorrectorStudy s;
  for (double nu : nus) {
    const GridPtr g = build_layer_grid(c.geometry, c.grid.n1, nu, U, kStudyRule);
    std::vector<double> tr(g->n1()), tr_dt(g->n1());
    for (int i = 0; i < g->n1(); ++i) {
      tr[i] = std::sin(2 * M_PI * g->x1(i) / L);
      tr_dt[i] = std::cos(2 * M_PI * g->x1(i) / L);
    }
    const double gsup = trace_sup(tr);
    const CorrectorFields cf = eval_corrector(tr, tr_dt, nu, c.background, g);
    CorrectorStudyRow row;
    row.nu = nu;
    row.n2 = g->n2();
    row.norms = corrector_norm_table(cf);
    row.key_residual = key_cancellation_residual(cf);
    row.key_residual_fd = key_cancellation_residual_fd(cf);
    row.key_scale = key_cancellation_scale(cf);
    const WeightedNorms wn = weighted_bound_check(cf, gsup);
    row.winf_ratio = wn.winf / (nu * gsup);
    row.w2_ratio = wn.w2 / (std::sqrt(nu) * gsup);
    row.layer_sup = pure_layer_sup(*g, nu, U);
    row.layer_sup_expected = 4.0 * std::exp(-2.0) * nu / U;
    s.rows.push_back(std::move(row));
  }
  double wmin = 1e300, wmax = 0, vmin = 1e300, vmax = 0;
  for (const auto& r : s.rows) {
    s.max_key_ratio = std::max(s.max_key_ratio, r.key_residual / r.key_scale);
    s.max_layer_error = std::max(s.max_layer_error,
                                 std::abs(r.layer_sup - r.layer_sup_expected) / r.layer_sup_expected);
    wmin = std::min(wmin, r.winf_ratio);
    wmax = std::max(wmax, r.winf_ratio);
    vmin = std::min(vmin, r.w2_ratio);
    vmax = std::max(vmax, r.w2_ratio);
  }
  s.winf_variation = wmax / wmin;
  s.w2_variation = vmax / vmin;
  for (const auto& name : kNormNames) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : s.rows) pts.emplace_back(r.nu, r.norms.at(name));
    const double slope = fit_rate(pts).slope;
    s.slopes[name] = slope;
    s.max_slope_deviation =
        std::max(s.max_slope_deviation, std::abs(slope - kNormExponents.at(name)));
  }
  return s;
}

CompatStudy compat_study(const RunConfig& c) {
  validate(c);
  const double h = c.geometry.height_h;
  const int needed = static_cast<int>(std::ceil(3.0 * h / c.initial.collar));
  CompatStudy s;
  s.n2 = std::max(c.grid.n2, needed);
  const GridPtr g = build_grid(c.geometry, c.grid.n1, s.n2, 1.0);
  const VectorField u0 = full_initial_velocity(make_initial_data(g, c.initial), c.background);
  s.report = check_compat(u0, VectorField{}, c.background);
  const VectorField f0 = repaired_forcing(s.report.p0);
  s.repaired_cond_0 = check_compat(u0, f0, c.background).cond_0_residual;
  return s;
}

std::string error_json(const std::string& kind, const std::string& message, int code) {
  return json{{"error", message}, {"kind", kind}, {"exit_code", code}}.dump();
}

std::string series_csv(const RunResult& r) {
  std::string s = "# schema=" + std::to_string(kCsvSchema) + "\n";
  s += "# units: nondimensional; t time; norms L2 over the channel; budget terms are "
       "rates of 1/2 ||w||^2; nan where no centered budget exists\n";
  s += "t,vv_error,w_norm,z_norm";
  for (const auto& n : kBudgetTermNames) s += "," + n;
  s += ",lhs_dwdt,lhs_visc,I,residual\n";
  const std::string nan = fmt(std::numeric_limits<double>::quiet_NaN());
  for (const auto& row : r.rows) {
    s += fmt(row.t) + "," + fmt(row.vv_error) + "," + fmt(row.w_norm) + "," + fmt(row.z_norm);
    const auto& b = row.budget;
    for (int k = 0; k < kBudgetTerms; ++k) s += "," + (row.has_budget ? fmt(b.terms[k]) : nan);
    for (double x : {b.lhs_dwdt, b.lhs_visc, b.I_combined, b.residual})
      s += "," + (row.has_budget ? fmt(x) : nan);
    s += "\n";
  }
  return s;
}

std::string sweep_csv(const SweepSummary& s) {
  std::string out = "# schema=" + std::to_string(kCsvSchema) + "\n";
  out += "# units: nondimensional; sup_error = max_t ||u - ubar||_2; gate_change relative; "
         "config_hash=" + s.config_hash + "\n";
  out += "nu,n2,min_dx2,dt,sup_error,sup_error_refined,gate_change,gate_passed,gronwall_C,"
         "max_budget_residual,trace_max";
  for (const auto& n : kNormNames) out += "," + n;
  out += ",note\n";
  for (const auto& r : s.rows) {
    out += fmt(r.nu) + "," + std::to_string(r.n2) + "," + fmt(r.min_dx2) + "," + fmt(r.dt) + "," +
           fmt(r.sup_error) + "," + fmt(r.sup_error_refined) + "," + fmt(r.gate_change) + "," +
           (r.gate_passed ? "1" : "0") + "," + fmt(r.gronwall_C) + "," +
           fmt(r.max_budget_residual) + "," + fmt(r.trace_max);
    for (const auto& n : kNormNames) {
      auto it = r.corrector_norms.find(n);
      out += "," + fmt(it == r.corrector_norms.end() ? std::nan("") : it->second);
    }
    out += ",\"" + r.failure + "\"\n";
  }
  return out;
}

int cmd_run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string hash = config_hash(c, "run");
    const RunResult r = run_pair(c, c.nu);
    write_file(artifact(c, "series", hash, ".csv"), series_csv(r));
    json j = provenance(c, "run", hash);
    j["nu"] = r.nu;
    j["n2"] = r.n2;
    j["dt"] = r.dt;
    j["layer_check"] = layer_json(r.layer);
    j["sup_error"] = r.sup_error;
    j["gronwall"] = {{"C", r.gronwall.C},
                     {"max_ratio", r.gronwall.max_ratio},
                     {"binding_t", r.gronwall.binding_t}};
    j["max_budget_residual"] = r.max_budget_residual;
    j["trace_max"] = r.trace_max;
    j["trace_below_threshold"] = r.trace_below_threshold;
    j["corrector_norms_final"] = norms_json(r.corrector_norms);
    j["compat"] = {{"cond_minus1_residual", r.cond_minus1_residual},
                   {"cond_0_residual", r.cond_0_residual},
                   {"higher_order", "unchecked"}};
    const std::string text = j.dump(2);
    write_file(artifact(c, "summary", hash, ".json"), text + "\n");
    out << text << "\n";
    return kExitOk;
  });
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string hash = config_hash(c, "sweep");
    const SweepSummary s = run_sweep(c, hash, c.threads);
    write_file(artifact(c, "sweep", hash, ".csv"), sweep_csv(s));
    json j = provenance(c, "sweep", hash);
    json rows = json::array();
    for (const auto& r : s.rows)
      rows.push_back({{"nu", r.nu},
                      {"n2", r.n2},
                      {"min_dx2", r.min_dx2},
                      {"sup_error", r.sup_error},
                      {"sup_error_refined", r.sup_error_refined},
                      {"gate_change", r.gate_change},
                      {"gate_passed", r.gate_passed},
                      {"excluded_reason", r.failure},
                      {"gronwall_C", r.gronwall_C},
                      {"max_budget_residual", r.max_budget_residual},
                      {"trace_max", r.trace_max},
                      {"trace_below_threshold", r.trace_max <= c.trace_threshold},
                      {"corrector_norms_final", norms_json(r.corrector_norms)}});
    j["rows"] = rows;
    if (s.fit_ok)
      j["rate_fit"] = {{"nus", s.fit.nus},
                       {"errors", s.fit.errors},
                       {"slope", s.fit.slope},
                       {"intercept", s.fit.intercept},
                       {"r_squared", s.fit.r_squared},
                       {"pair_slopes", s.fit.pair_slopes}};
    else
      j["rate_fit"] = nullptr;
    j["gronwall_C_ratio"] = s.gronwall_ratio;
    const std::string text = j.dump(2);
    write_file(artifact(c, "summary", hash, ".json"), text + "\n");
    out << text << "\n";
    if (!s.fit_ok) {
      err << error_json("numerical", "fewer than 3 viscosities passed the resolution gate",
                        kExitNumerical)
          << "\n";
      return kExitNumerical;
    }
    return kExitOk;
  });
}

int cmd_corrector_study(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string hash = config_hash(c, "corrector-study");
    const CorrectorStudy s = corrector_study(c, c.corrector_nu_list);
    std::string csv = "# schema=" + std::to_string(kCsvSchema) + "\n";
    csv += "# units: nondimensional; L2 norms over the channel for trace sin(2 pi x1/L)\n";
    csv += "nu,n2";
    for (const auto& n : kNormNames) csv += "," + n;
    csv += ",key_residual,key_residual_fd,key_scale,winf_ratio,w2_ratio,layer_sup,"
           "layer_sup_expected\n";
    json rows = json::array();
    for (const auto& r : s.rows) {
      csv += fmt(r.nu) + "," + std::to_string(r.n2);
      for (const auto& n : kNormNames) csv += "," + fmt(r.norms.at(n));
      for (double x : {r.key_residual, r.key_residual_fd, r.key_scale, r.winf_ratio, r.w2_ratio,
                       r.layer_sup, r.layer_sup_expected})
        csv += "," + fmt(x);
      csv += "\n";
      rows.push_back({{"nu", r.nu},
                      {"n2", r.n2},
                      {"norms", norms_json(r.norms)},
                      {"key_residual", r.key_residual},
                      {"key_scale", r.key_scale},
                      {"winf_ratio", r.winf_ratio},
                      {"w2_ratio", r.w2_ratio},
                      {"layer_sup", r.layer_sup},
                      {"layer_sup_expected", r.layer_sup_expected}});
    }
    write_file(artifact(c, "corrector", hash, ".csv"), csv);
    json j = provenance(c, "corrector-study", hash);
    j["rows"] = rows;
    json slopes = json::object(), expected = json::object();
    for (const auto& [k, v] : s.slopes) {
      slopes[k] = v;
      expected[k] = kNormExponents.at(k);
    }
    j["slopes"] = slopes;
    j["expected_slopes"] = expected;
    j["max_slope_deviation"] = s.max_slope_deviation;
    j["max_key_ratio"] = s.max_key_ratio;
    j["winf_variation"] = s.winf_variation;
    j["w2_variation"] = s.w2_variation;
    j["max_layer_error"] = s.max_layer_error;
    const std::string text = j.dump(2);
    write_file(artifact(c, "summary", hash, ".json"), text + "\n");
    out << text << "\n";
    return kExitOk;
  });
}

int cmd_compat_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string hash = config_hash(c, "compat-check");
    const CompatStudy s = compat_study(c);
    json j = provenance(c, "compat-check", hash);
    j["n2"] = s.n2;
    j["cond_minus1_residual"] = s.report.cond_minus1_residual;
    j["cond_0_residual"] = s.report.cond_0_residual;
    j["poisson_residual"] = s.report.poisson_residual;
    j["compat_defect"] = s.report.compat_defect;
    j["higher_order"] = s.report.higher_order;
    j["repaired_cond_0_residual"] = s.repaired_cond_0;
    const std::string text = j.dump(2);
    write_file(artifact(c, "summary", hash, ".json"), text + "\n");
    out << text << "\n";
    return kExitOk;
  });
}

}  // namespace vvl
