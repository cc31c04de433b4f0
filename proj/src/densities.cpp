#include "uot/densities.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace uot {

namespace {

struct Raster {
  int width = 0;
  int height = 0;
  std::vector<double> values; // row-major, row 0 first
};

std::vector<double> gaussian_cells(const GaussianComponent &c, const SpatialGrid &grid) {
  std::vector<double> out(grid.cell_count());
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const double ex = grid.x_center(i) - c.mean_x;
      double e = ex * ex / (2.0 * c.variance_x);
      if (grid.dims() == 2) {
        const double ey = grid.y_center(j) - c.mean_y;
        e += ey * ey / (2.0 * c.variance_y);
      }
      out[static_cast<std::size_t>(j) * grid.nx() + i] = std::exp(-e);
    }
  }
  const double mass = integrate(out, grid);
  if (!(mass > 0.0)) {
    throw std::invalid_argument("gaussian component has no mass on the grid");
  }
  for (double &v : out) v /= mass;
  return out;
}

SpatialField resample(const Raster &raster, const SpatialGrid &grid, double scale,
                      const std::string &path) {
  if (raster.width <= 0 || raster.height <= 0) {
    throw std::runtime_error(path + ": image has zero size");
  }
  SpatialField out(grid);
  for (int j = 0; j < grid.ny(); ++j) {
    const int r = grid.dims() == 2
                      ? static_cast<int>((j + 0.5) * raster.height / grid.ny())
                      : 0;
    for (int i = 0; i < grid.nx(); ++i) {
      const int c = static_cast<int>((i + 0.5) * raster.width / grid.nx());
      out(i, j) = scale * raster.values[static_cast<std::size_t>(r) * raster.width + c];
    }
  }
  return out;
}

// Reads the next header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream &in, const std::string &path) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  if (tok.empty()) {
    throw std::runtime_error(path + ": truncated PGM header");
  }
  return tok;
}

long pnm_int(std::istream &in, const std::string &path, const char *what) {
  const std::string tok = pnm_token(in, path);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != tok.size()) {
    throw std::runtime_error(path + ": bad PGM " + what + " '" + tok + "'");
  }
  return v;
}

Raster read_pgm(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error(path + ": cannot open");
  }
  const std::string magic = pnm_token(in, path);
  if (magic != "P2" && magic != "P5") {
    throw std::runtime_error(path + ": unsupported magic number '" + magic + "'");
  }
  Raster img;
  const long w = pnm_int(in, path, "width");
  const long h = pnm_int(in, path, "height");
  const long maxval = pnm_int(in, path, "maxval");
  if (w <= 0 || h <= 0) {
    throw std::runtime_error(path + ": image has zero size");
  }
  if (maxval <= 0 || maxval > 65535) {
    throw std::runtime_error(path + ": maxval " + std::to_string(maxval) + " out of range");
  }
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  img.values.resize(count);
  const double inv = 1.0 / static_cast<double>(maxval);
  if (magic == "P2") {
    for (std::size_t p = 0; p < count; ++p) {
      long v;
      try {
        v = pnm_int(in, path, "sample");
      } catch (const std::runtime_error &) {
        throw std::runtime_error(path + ": truncated payload at sample " + std::to_string(p));
      }
      if (v < 0 || v > maxval) {
        throw std::runtime_error(path + ": sample " + std::to_string(v) + " exceeds maxval");
      }
      img.values[p] = static_cast<double>(v) * inv;
    }
  } else {
    // pnm_token consumed the single whitespace byte after maxval.
    const std::size_t bytes_per = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(count * bytes_per);
    in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
      throw std::runtime_error(path + ": truncated payload");
    }
    for (std::size_t p = 0; p < count; ++p) {
      long v = bytes_per == 1 ? raw[p] : (raw[2 * p] << 8) | raw[2 * p + 1];
      if (v > maxval) {
        throw std::runtime_error(path + ": sample " + std::to_string(v) + " exceeds maxval");
      }
      img.values[p] = static_cast<double>(v) * inv;
    }
  }
  return img;
}

Raster read_csv_matrix(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open");
  }
  Raster m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used == 0 || cell.find_first_not_of(" \t\r", used) != std::string::npos) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad value '" + cell + "'");
      }
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": density must be finite and nonnegative");
      }
      m.values.push_back(v);
      ++cols;
    }
    if (m.height == 0) {
      m.width = cols;
    } else if (cols != m.width) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(m.width) + " columns, got " + std::to_string(cols));
    }
    ++m.height;
  }
  return m;
}

} // namespace

DensitySpec DensitySpec::gaussian(double mean, double variance, double scale) {
  DensitySpec s;
  s.kind = Kind::gaussian;
  s.components.push_back({mean, 0.5, variance, variance, 1.0});
  s.scale = scale;
  return s;
}

DensitySpec DensitySpec::gaussian_2d(double mean_x, double mean_y, double variance, double scale) {
  DensitySpec s;
  s.kind = Kind::gaussian;
  s.components.push_back({mean_x, mean_y, variance, variance, 1.0});
  s.scale = scale;
  return s;
}

DensitySpec DensitySpec::uniform(double scale) {
  DensitySpec s;
  s.kind = Kind::uniform;
  s.scale = scale;
  return s;
}

void DensitySpec::validate(int dims) const {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("scale must be finite and >= 0");
  }
  if (kind == Kind::gaussian || kind == Kind::mixture) {
    if (components.empty()) {
      throw std::invalid_argument("components must not be empty");
    }
    if (kind == Kind::gaussian && components.size() != 1) {
      throw std::invalid_argument("components: gaussian takes exactly one component");
    }
    for (const auto &c : components) {
      if (!(c.weight >= 0.0)) throw std::invalid_argument("weight must be >= 0");
      if (!(c.variance_x > 0.0) || (dims == 2 && !(c.variance_y > 0.0))) {
        throw std::invalid_argument("variance must be > 0");
      }
      if (!(c.mean_x >= 0.0 && c.mean_x <= 1.0) ||
          (dims == 2 && !(c.mean_y >= 0.0 && c.mean_y <= 1.0))) {
        throw std::invalid_argument("mean must lie in [0,1]");
      }
    }
  }
  if ((kind == Kind::image || kind == Kind::csv) && path.empty()) {
    throw std::invalid_argument("path is required for file densities");
  }
}

const char *to_string(DensitySpec::Kind kind) {
  switch (kind) {
  case DensitySpec::Kind::gaussian: return "gaussian";
  case DensitySpec::Kind::mixture: return "mixture";
  case DensitySpec::Kind::uniform: return "uniform";
  case DensitySpec::Kind::image: return "image";
  case DensitySpec::Kind::csv: return "csv";
  }
  return "?";
}

DensitySpec::Kind density_kind_from_string(const std::string &name) {
  if (name == "gaussian") return DensitySpec::Kind::gaussian;
  if (name == "mixture") return DensitySpec::Kind::mixture;
  if (name == "uniform") return DensitySpec::Kind::uniform;
  if (name == "image") return DensitySpec::Kind::image;
  if (name == "csv") return DensitySpec::Kind::csv;
  throw std::invalid_argument("unknown density kind '" + name + "'");
}

SpatialField make_density(const DensitySpec &spec, const SpatialGrid &grid) {
  spec.validate(grid.dims());
  switch (spec.kind) {
  case DensitySpec::Kind::uniform:
    return SpatialField(grid, spec.scale);
  case DensitySpec::Kind::image:
    return load_grayscale(spec.path, grid, spec.scale);
  case DensitySpec::Kind::csv:
    return load_csv_density(spec.path, grid, spec.scale);
  case DensitySpec::Kind::gaussian:
  case DensitySpec::Kind::mixture:
    break;
  }
  std::vector<double> acc(grid.cell_count(), 0.0);
  for (const auto &c : spec.components) {
    const double w = spec.kind == DensitySpec::Kind::gaussian ? 1.0 : c.weight;
    const auto cells = gaussian_cells(c, grid);
    for (std::size_t n = 0; n < acc.size(); ++n) acc[n] += w * cells[n];
  }
  for (double &v : acc) v *= spec.scale;
  return SpatialField(grid, std::move(acc));
}

SpatialField load_grayscale(const std::string &path, const SpatialGrid &grid, double scale) {
  return resample(read_pgm(path), grid, scale, path);
}

SpatialField load_csv_density(const std::string &path, const SpatialGrid &grid, double scale) {
  return resample(read_csv_matrix(path), grid, scale, path);
}

CellField linear_path(const SpatialField &mu0, const SpatialField &mu1, const TimeGrid &time) {
  if (!(mu0.grid() == mu1.grid())) {
    throw std::invalid_argument("linear_path: endpoint shapes differ");
  }
  CellField out(mu0.grid(), time);
  const auto a = mu0.values();
  const auto b = mu1.values();
  for (int k = 0; k < time.nt(); ++k) {
    const double t = time.t_mid(k);
    auto dst = out.slice(k);
    for (std::size_t c = 0; c < dst.size(); ++c) {
      dst[c] = (1.0 - t) * a[c] + t * b[c];
    }
  }
  return out;
}

} // namespace uot
