#include <CLI11.hpp>

#include <iostream>

#include "optomech/commands.hpp"

using namespace optomech;

namespace {

struct Common {
  std::string config;
  std::string out = "out";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "YAML run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--override", c.overrides, "dotted.key=value, repeatable")->take_all();
  cmd->add_option("--seed", c.seed, "random seed (simulate)");
  cmd->add_option("--format", c.format, "csv or csv+svg")->check(CLI::IsMember({"csv", "csv+svg"}));
}

Json run(const RunManifest& m) {
  RunConfig cfg = load_config(m.config_path, m.overrides);
  if (m.seed) cfg.simulate.sim.seed = *m.seed;
  const OutputOptions out{m.output_dir, m.format == "csv+svg"};
  write_manifest(m, out.dir);
  if (m.command == "detuning-sweep") return cmd_detuning_sweep(cfg, out);
  if (m.command == "noise-budget") return cmd_noise_budget(cfg, out);
  if (m.command == "calibrate") return cmd_calibrate(cfg, out);
  if (m.command == "applications") return cmd_applications(cfg, m.subcommand, out);
  if (m.command == "simulate") return cmd_simulate(cfg, out);
  fail(ErrorKind::Config, "unknown command '" + m.command + "'");
}

RunManifest manifest_for(const std::string& command, const std::string& sub, const Common& c) {
  RunManifest m;
  m.command = command;
  m.subcommand = sub;
  m.config_path = std::filesystem::absolute(c.config).string();
  m.output_dir = c.out;
  m.overrides = c.overrides;
  m.version = tool_version();
  m.seed = c.seed;
  m.format = c.format;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optomechanical acoustic sensor modeling"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  Common common;
  std::string app_sub;
  std::string manifest_path, rerun_out;

  auto* sweep = app.add_subcommand("detuning-sweep", "response versus laser-cavity detuning");
  add_common(sweep, common);
  auto* noise = app.add_subcommand("noise-budget", "noise spectrum, NEP curve and sensitivity report");
  add_common(noise, common);
  auto* cal = app.add_subcommand("calibrate", "PZT source calibration and responsivity");
  add_common(cal, common);
  auto* apps = app.add_subcommand("applications", "application-level estimates");
  add_common(apps, common);
  apps->add_option("which", app_sub, "trace-gas | cell-vib | cooling | ldr | force-sens")
      ->required()
      ->check(CLI::IsMember({"trace-gas", "cell-vib", "cooling", "ldr", "force-sens"}));
  auto* sim = app.add_subcommand("simulate", "seeded Langevin simulation with PSD overlay");
  add_common(sim, common);
  auto* rerun = app.add_subcommand("rerun", "repeat a run from its manifest.json");
  rerun->add_option("manifest", manifest_path, "manifest.json of a previous run")->required();
  rerun->add_option("--out", rerun_out, "output directory (default: the recorded one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunManifest m;
    if (rerun->parsed()) {
      m = RunManifest::load(manifest_path);
      if (!rerun_out.empty()) m.output_dir = rerun_out;
    } else {
      for (auto* sc : app.get_subcommands()) m = manifest_for(sc->get_name(), app_sub, common);
    }
    const Json summary = run(m);
    std::cout << summary.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error (data): " << e.what() << "\n";
    return 3;
  }
}
