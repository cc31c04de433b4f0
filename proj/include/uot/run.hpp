#pragma once

// Experiment runner: solves one RunConfig and writes its output directory.
//
//   <output_dir>/config.json      resolved configuration
//   <output_dir>/summary.json     objective and diagnostics
//   <output_dir>/<field files>    see io.hpp
//   <output_dir>/baseline/        classical run with the source frozen at zero
//   <output_dir>/alpha_<v>/       one run per alpha_sweep entry

#include <string>

#include <json.hpp>

#include "uot/config.hpp"
#include "uot/kernels.hpp"

namespace uot {

// Solves `config` and writes fields and a summary into `dir` (no sweep, no
// baseline). Returns the summary. Throws DivergenceError.
nlohmann::json run_single(const RunConfig &config, const std::string &dir,
                          const KernelTable &kernels = active_kernels());

// Full run including baseline and sweep. Returns the top-level summary.
nlohmann::json run(const RunConfig &config, const KernelTable &kernels = active_kernels());

// Recomputes the summary diagnostics from a run directory's config.json and
// field files.
nlohmann::json diagnose_run(const std::string &dir);

} // namespace uot
