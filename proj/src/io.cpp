#include "uot/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uot {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error(path + ": cannot open for writing");
  }
  return out;
}

void finish(std::ofstream &out, const std::string &path) {
  out.flush();
  if (!out) {
    throw std::runtime_error(path + ": write failed");
  }
}

} // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::string &path, std::span<const double> values, int rows,
                      int cols) {
  if (values.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument(path + ": matrix shape does not match value count");
  }
  auto out = open_out(path);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c) out << ',';
      out << format_double(values[static_cast<std::size_t>(r) * cols + c]);
    }
    out << '\n';
  }
  finish(out, path);
}

Matrix read_matrix_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open");
  }
  Matrix m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    const char *p = line.data();
    const char *end = line.data() + line.size();
    while (p <= end) {
      const char *comma = std::find(p, end, ',');
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(p, comma, v);
      if (ec != std::errc() || ptr != comma) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad number");
      }
      row.push_back(v);
      p = comma + 1;
    }
    if (!m.empty() && row.size() != m.front().size()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": ragged row");
    }
    m.push_back(std::move(row));
  }
  return m;
}

void write_json(const std::string &path, const nlohmann::json &doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

nlohmann::json read_json(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open");
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string slab_file(const std::string &dir, const char *prefix, int k) {
  char name[64];
  std::snprintf(name, sizeof name, "%s_%03d.csv", prefix, k);
  return (fs::path(dir) / name).string();
}

void write_state(const SolverState &state, const std::vector<IterationReport> &reports,
                 const std::string &dir) {
  fs::create_directories(dir);
  const SpatialGrid &g = state.mu.space();
  const int nx = g.nx();
  const int ny = g.ny();
  for (int k = 0; k < state.mu.nt(); ++k) {
    write_matrix_csv(slab_file(dir, "mu", k), state.mu.slice(k), ny, nx);
    write_matrix_csv(slab_file(dir, "phi", k), state.phi.slice(k), ny, nx);
    write_matrix_csv(slab_file(dir, "mx", k), state.m.x_slice(k), ny, nx + 1);
    if (g.dims() == 2) {
      write_matrix_csv(slab_file(dir, "my", k), state.m.y_slice(k), ny + 1, nx);
    }
  }
  const std::string fpath = (fs::path(dir) / "f.csv").string();
  write_matrix_csv(fpath, state.f.values(), state.f.size(), 1);

  const std::string rpath = (fs::path(dir) / "reports.csv").string();
  auto out = open_out(rpath);
  out << "iteration,primal,dual,gap,continuity_residual,hj_violation,hj_equality,"
         "mass_error_f,mass_error_phi\n";
  for (const auto &r : reports) {
    out << r.iteration << ',' << format_double(r.primal) << ',' << format_double(r.dual) << ','
        << format_double(r.gap) << ',' << format_double(r.continuity_residual) << ','
        << format_double(r.hj_violation) << ',' << format_double(r.hj_equality) << ','
        << format_double(r.mass_error_f) << ',' << format_double(r.mass_error_phi) << '\n';
  }
  finish(out, rpath);
}

SolverState read_state(const std::string &dir, const SpatialGrid &space, const TimeGrid &time) {
  auto load = [&](const std::string &path, int rows, int cols, std::span<double> dst) {
    const Matrix m = read_matrix_csv(path);
    if (m.size() != static_cast<std::size_t>(rows) ||
        (rows > 0 && m.front().size() != static_cast<std::size_t>(cols))) {
      throw std::runtime_error(path + ": expected " + std::to_string(rows) + " x " +
                               std::to_string(cols) + " values");
    }
    std::size_t n = 0;
    for (const auto &row : m) {
      for (double v : row) dst[n++] = v;
    }
  };
  const int nx = space.nx();
  const int ny = space.ny();
  FaceField m(space, time);
  CellField mu(space, time);
  CellField phi(space, time);
  SourceSeries f(time);
  for (int k = 0; k < time.nt(); ++k) {
    load(slab_file(dir, "mu", k), ny, nx, mu.slice(k));
    load(slab_file(dir, "phi", k), ny, nx, phi.slice(k));
    load(slab_file(dir, "mx", k), ny, nx + 1, m.x_slice(k));
    if (space.dims() == 2) {
      load(slab_file(dir, "my", k), ny + 1, nx, m.y_slice(k));
    }
  }
  load((fs::path(dir) / "f.csv").string(), time.nt(), 1, f.values());
  return SolverState{m, mu, f, phi, m, mu, f};
}

void write_uw1(const Uw1Result &result, const std::string &dir) {
  fs::create_directories(dir);
  const SpatialGrid &g = result.phi.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  write_matrix_csv(slab_file(dir, "phi", 0), result.phi.values(), ny, nx);
  write_matrix_csv(slab_file(dir, "mx", 0), result.mx, ny, nx + 1);
  if (g.dims() == 2) {
    write_matrix_csv(slab_file(dir, "my", 0), result.my, ny + 1, nx);
  }
  const double f = result.source;
  write_matrix_csv((fs::path(dir) / "f.csv").string(), std::span<const double>(&f, 1), 1, 1);

  const std::string rpath = (fs::path(dir) / "reports.csv").string();
  auto out = open_out(rpath);
  out << "iteration,value,constraint_residual\n";
  for (const auto &r : result.reports) {
    out << r.iteration << ',' << format_double(r.value) << ','
        << format_double(r.constraint_residual) << '\n';
  }
  finish(out, rpath);
}

} // namespace uot
