// uot: solve unnormalized optimal transport problems from JSON configs.
//
//   uot solve --config run.json
//   uot preset --name exp1 [--out dir]
//   uot diagnose --run dir

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "uot/config.hpp"
#include "uot/run.hpp"
#include "uot/state.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kDiverged = 3 };

void print_result(const nlohmann::json &summary, const std::string &dir) {
  std::cout << "objective " << summary.value("objective", nlohmann::json()).dump()
            << "  converged " << summary.value("converged", false) << "  iterations "
            << summary.value("iterations_run", 0L) << "\n";
  if (summary.contains("classical_baseline")) {
    std::cout << "classical baseline " << summary["classical_baseline"]["objective"].dump()
              << "\n";
  }
  if (summary.contains("alpha_sweep")) {
    for (const auto &e : summary["alpha_sweep"]) {
      std::cout << "alpha " << e["alpha"].dump() << "  objective " << e["objective"].dump()
                << "\n";
    }
  }
  std::cout << "output " << dir << "\n";
}

int execute(const uot::RunConfig &config) {
  const nlohmann::json summary = uot::run(config);
  print_result(summary, config.output_dir);
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Unnormalized optimal transport solver"};
  app.require_subcommand(1);

  std::string config_path;
  auto *solve = app.add_subcommand("solve", "Run a JSON configuration");
  solve->add_option("--config", config_path, "Configuration file")->required();

  std::string preset_name;
  std::string preset_out;
  auto *preset = app.add_subcommand("preset", "Print a preset, or run it with --out");
  preset->add_option("--name", preset_name, "Preset name")->required();
  preset->add_option("--out", preset_out, "Run the preset into this directory");

  std::string run_dir;
  auto *diag = app.add_subcommand("diagnose", "Recompute diagnostics of a run directory");
  diag->add_option("--run", run_dir, "Run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      return execute(uot::load_run_config(config_path));
    }
    if (*preset) {
      nlohmann::json doc = uot::preset_json(preset_name);
      if (preset_out.empty()) {
        std::cout << doc.dump(2) << "\n";
        return kOk;
      }
      doc["output_dir"] = std::filesystem::absolute(preset_out).string();
      return execute(uot::parse_run_config(doc));
    }
    if (*diag) {
      std::cout << uot::diagnose_run(run_dir).dump(2) << "\n";
      return kOk;
    }
  } catch (const uot::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const uot::DivergenceError &e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
