#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "vvl/errors.hpp"
#include "vvl/harness.hpp"
#include "vvl/selftest.hpp"

namespace {

struct Overrides {
  std::string config;
  std::vector<double> nu;
  std::optional<double> a;
  std::string out;
};

// File (or defaults), then the environment for output_dir, then flags.
vvl::RunConfig resolve(const Overrides& o, const std::string& command) {
  vvl::RunConfig c = o.config.empty() ? vvl::RunConfig{} : vvl::load_config(o.config);
  if (const char* env = std::getenv("VVLIMIT_OUTPUT_DIR"); env && *env) c.output_dir = env;
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.a) c.background.a = *o.a;
  if (!o.nu.empty()) {
    if (command == "run") {
      if (o.nu.size() != 1) throw vvl::ConfigError("run: --nu takes exactly one value");
      c.nu = o.nu.front();
    } else if (command == "corrector-study") {
      c.corrector_nu_list = o.nu;
    } else {
      c.nu_list = o.nu;
    }
  }
  vvl::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vanishing-viscosity limit experiments in a periodic channel"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration file");
    sub->add_option("--nu", o.nu, "viscosity (run) or list of viscosities (sweep, corrector-study)");
    sub->add_option("--a", o.a, "tangential background velocity a");
    sub->add_option("--out", o.out, "output directory (overrides VVLIMIT_OUTPUT_DIR and the file)");
  };
  CLI::App* run = app.add_subcommand("run", "paired Euler / Navier-Stokes run with diagnostics");
  CLI::App* sweep = app.add_subcommand("sweep", "viscosity sweep and rate fit");
  CLI::App* corr = app.add_subcommand("corrector-study", "corrector norm scaling (no solver)");
  CLI::App* compat = app.add_subcommand("compat-check", "initial-data compatibility report");
  CLI::App* self = app.add_subcommand("selftest", "built-in verification suite");
  for (CLI::App* s : {run, sweep, corr, compat}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : vvl::kExitConfig;
  }

  if (self->parsed()) return vvl::cmd_selftest(std::cout, std::cerr);

  const std::string command = run->parsed()      ? "run"
                              : sweep->parsed()  ? "sweep"
                              : corr->parsed()   ? "corrector-study"
                                                 : "compat-check";
  vvl::RunConfig c;
  try {
    c = resolve(o, command);
  } catch (const vvl::ConfigError& e) {
    std::cerr << vvl::error_json("config", e.what(), vvl::kExitConfig) << "\n";
    return vvl::kExitConfig;
  }
  if (command == "run") return vvl::cmd_run(c, std::cout, std::cerr);
  if (command == "sweep") return vvl::cmd_sweep(c, std::cout, std::cerr);
  if (command == "corrector-study") return vvl::cmd_corrector_study(c, std::cout, std::cerr);
  return vvl::cmd_compat_check(c, std::cout, std::cerr);
}
