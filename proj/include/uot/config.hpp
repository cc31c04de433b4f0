#pragma once

// Run configuration: one JSON document, optionally layered on a named
// preset. Keys are lower_snake_case:
//
//   {
//     "preset": "exp1",
//     "problem": {"p": 2, "alpha": 100, "dims": 1, "n_t": 15, "n_x": 35, "n_y": 35},
//     "mu0": {"kind": "gaussian", "mean": 0.333, "variance": 0.01, "scale": 1},
//     "mu1": {...},
//     "solver": {"tau1": 1e-3, "tau2": 0.1, "iterations": 200000,
//                "tolerance": 1e-9, "report_every": 1000, "freeze_source": false},
//     "output_dir": "runs/exp1",
//     "alpha_sweep": [0.001, 0.01],
//     "classical_baseline": true
//   }

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uot/densities.hpp"
#include "uot/grid.hpp"
#include "uot/state.hpp"

namespace uot {

class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string &message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string &key() const { return key_; }

private:
  std::string key_;
};

struct RunConfig {
  std::string preset = "custom";
  int p = 2;
  double alpha = 100.0;
  int dims = 1;
  int n_t = 15;
  int n_x = 35;
  int n_y = 35;
  DensitySpec mu0;
  DensitySpec mu1;
  // For p = 1, zero means uw1_default_step.
  double tau1 = 0.0;
  double tau2 = 0.0;
  long iterations = 1;
  double tolerance = 1e-6;
  long report_every = 1000;
  bool freeze_source = false;
  std::string output_dir = "uot_run";
  std::vector<double> alpha_sweep;
  // Also solve with the source frozen at zero (p = 2 only).
  bool classical_baseline = false;

  SpatialGrid space() const;
  TimeGrid time() const;
  SolverConfig solver_config() const;
};

const std::vector<std::string> &preset_names();
// Throws ConfigError("preset", ...) for unknown names.
nlohmann::json preset_json(const std::string &name);

// Merges `doc` over its preset (if any) and validates. Relative density file
// paths are resolved against base_dir first, then against the source tree.
RunConfig parse_run_config(const nlohmann::json &doc, const std::string &base_dir = ".");
RunConfig load_run_config(const std::string &path);

// Fully resolved document; parse_run_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig &config);

} // namespace uot
