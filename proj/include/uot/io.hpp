#pragma once

// Plain-text field files. Every number is written with 17 significant digits,
// so reading a file back reproduces the doubles exactly.
//
// Run directory layout:
//   mu_{k:03}.csv, phi_{k:03}.csv   n_y rows x n_x columns (1D: one row)
//   mx_{k:03}.csv                   n_y rows x (n_x + 1) columns
//   my_{k:03}.csv                   (n_y + 1) rows x n_x columns, 2D only
//   f.csv                           one value per line
//   reports.csv                     header + one line per report

#include <string>
#include <vector>

#include <json.hpp>

#include "uot/solver.hpp"
#include "uot/state.hpp"

namespace uot {

using Matrix = std::vector<std::vector<double>>;

std::string format_double(double v);

void write_matrix_csv(const std::string &path, std::span<const double> values, int rows, int cols);
// Throws std::runtime_error with the path on failure or ragged rows.
Matrix read_matrix_csv(const std::string &path);

void write_json(const std::string &path, const nlohmann::json &doc);
nlohmann::json read_json(const std::string &path);

std::string slab_file(const std::string &dir, const char *prefix, int k);

void write_state(const SolverState &state, const std::vector<IterationReport> &reports,
                 const std::string &dir);
// Reads mu, phi, m and f back; the extrapolated copies are set equal to the
// iterate.
SolverState read_state(const std::string &dir, const SpatialGrid &space, const TimeGrid &time);

void write_uw1(const Uw1Result &result, const std::string &dir);

} // namespace uot
