#include "ndphoton/cli/app.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "ndphoton/cli/config.hpp"
#include "ndphoton/cli/run_config.hpp"
#include "ndphoton/cli/scenarios.hpp"
#include "ndphoton/error.hpp"
#include "ndphoton/parallel.hpp"
#include "ndphoton/version.hpp"

namespace ndphoton::cli {
namespace {

struct SimOptions {
  std::string preset;
  std::string config;
  std::vector<std::string> sets;
  std::string out;
};

void add_sim_options(CLI::App* sub, SimOptions& o) {
  sub->add_option("--preset", o.preset, "start from a built-in preset (default: paper-defaults)");
  sub->add_option("--config", o.config, "configuration file")->check(CLI::ExistingFile);
  sub->add_option("--set", o.sets, "override, e.g. --set pump.kt=0.05 rad/um")->take_all();
  sub->add_option("--out", o.out, "run directory (overrides output.dir)");
}

RunConfig build_config(const SimOptions& o, Scenario scenario) {
  RawConfig raw;
  if (!o.preset.empty() || o.config.empty()) {
    const std::string name = o.preset.empty() ? "paper-defaults" : o.preset;
    raw = parse_config(preset_text(name), "preset " + name);
  }
  if (!o.config.empty()) raw.merge(load_config(o.config));
  for (const auto& s : o.sets) apply_override(raw, s);
  RunConfig cfg = resolve(raw, scenario);
  if (!o.out.empty()) cfg.output.dir = o.out;
  return cfg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heralded non-diffracting single photons: pump, SPDC and propagation simulations",
               "ndphoton"};
  app.set_version_flag("--version", std::string("ndphoton ") + kVersion);
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  SimOptions pump_opt, spdc_opt, sweep_opt;
  CLI::App* pump = app.add_subcommand("pump-sim", "pump maps, annulus fit and y-z intensity sheet");
  add_sim_options(pump, pump_opt);
  CLI::App* spdc = app.add_subcommand("spdc-sim", "conditional angular spectrum and FP2 heralded map");
  add_sim_options(spdc, spdc_opt);
  CLI::App* sweep = app.add_subcommand("sweep", "coincidence and singles profiles along z");
  add_sim_options(sweep, sweep_opt);

  std::string analyze_dir, analyze_out;
  CLI::App* analyze = app.add_subcommand("analyze", "re-run the fits on a stored run directory");
  analyze->add_option("dir", analyze_dir, "run directory")->required();
  analyze->add_option("--out", analyze_out, "also write the report to this file");

  std::string preset_name;
  CLI::App* preset = app.add_subcommand("preset", "print a preset (or list them)");
  preset->add_option("name", preset_name);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    set_thread_count(threads);
    if (*preset) {
      if (preset_name.empty()) {
        for (const auto& n : preset_names()) out << n << "\n";
      } else {
        out << preset_text(preset_name);
      }
      return kExitOk;
    }
    if (*analyze) {
      std::vector<std::string> warnings;
      const std::string text = analyze_run(analyze_dir, warnings);
      for (const auto& w : warnings) err << "warning: " << w << "\n";
      out << text;
      if (!analyze_out.empty()) {
        std::ofstream f(analyze_out, std::ios::binary);
        f << text;
        if (!f) throw IoError("cannot write " + analyze_out);
      }
      return kExitOk;
    }
    if (*pump) {
      const RunConfig cfg = build_config(pump_opt, Scenario::PumpSim);
      run_pump_sim(cfg, cfg.output.dir, err);
      out << cfg.output.dir << "\n";
    } else if (*spdc) {
      const RunConfig cfg = build_config(spdc_opt, Scenario::SpdcSim);
      run_spdc_sim(cfg, cfg.output.dir, err);
      out << cfg.output.dir << "\n";
    } else if (*sweep) {
      const RunConfig cfg = build_config(sweep_opt, Scenario::Sweep);
      run_sweep(cfg, cfg.output.dir, err);
      out << cfg.output.dir << "\n";
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace ndphoton::cli
