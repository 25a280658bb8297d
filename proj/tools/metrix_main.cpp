// metrix: configuration-driven relaxation experiments.
//
//   metrix run <config-file> [--paper-scale] [--out DIR]
//   metrix presets
//   metrix emit-config <preset>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "metrix/config.hpp"
#include "metrix/experiment.hpp"
#include "metrix/presets.hpp"

namespace {

int cmd_run(const std::string& config_path, bool paper_scale, const std::string& out_dir) {
  std::ifstream is(config_path);
  if (!is) {
    std::cerr << "error: cannot open config file '" << config_path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << is.rdbuf();
  metrix::ParseResult parsed = metrix::parse_config(buf.str());
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors)
      std::cerr << config_path << ":" << e.line << ": " << e.message << "\n";
    return 2;
  }
  metrix::ExperimentConfig cfg = *parsed.config;
  if (paper_scale) metrix::apply_paper_scale(cfg);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  try {
    const metrix::ExperimentResult result = metrix::run_experiment(cfg);
    std::cout << "problem: " << cfg.problem << "\n";
    std::cout << "steps: " << result.trajectory.steps
              << "  t_final: " << result.trajectory.final_time << "\n";
    for (const auto& [k, v] : result.summary) std::cout << k << " = " << v << "\n";
    if (result.trajectory.failed) {
      std::cerr << "integrator failure: " << result.trajectory.failure << "\n";
      std::cerr << "partial trajectory written to " << cfg.out_dir << "\n";
      return 1;
    }
    std::cout << "artifacts written to " << cfg.out_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"metric-bracket relaxation experiments"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
  std::string config_path;
  std::string out_dir;
  bool paper_scale = false;
  run_cmd->add_option("config", config_path, "config file (key = value format)")->required();
  run_cmd->add_flag("--paper-scale", paper_scale, "restore full published resolution");
  run_cmd->add_option("--out", out_dir, "override the output directory");

  auto* presets_cmd = app.add_subcommand("presets", "list the built-in presets");

  auto* emit_cmd = app.add_subcommand("emit-config", "print a preset's full config");
  std::string preset_name;
  emit_cmd->add_option("preset", preset_name, "preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (run_cmd->parsed()) return cmd_run(config_path, paper_scale, out_dir);
  if (presets_cmd->parsed()) {
    std::cout << metrix::format_preset_table();
    return 0;
  }
  if (emit_cmd->parsed()) {
    if (!metrix::is_preset(preset_name)) {
      std::cerr << "error: unknown preset '" << preset_name << "'\n";
      std::cerr << "known presets:\n" << metrix::format_preset_table();
      return 2;
    }
    std::cout << metrix::serialize_config(metrix::preset_config(preset_name));
    return 0;
  }
  return 2;
}
