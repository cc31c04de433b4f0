#pragma once

// Input densities: normalized Gaussian bumps, mixtures, uniform fields and
// densities read from grayscale images or CSV matrices.

#include <string>
#include <vector>

#include "uot/grid.hpp"

namespace uot {

struct GaussianComponent {
  // Mean in [0,1]^dims; the second entry is ignored in 1D.
  double mean_x = 0.5;
  double mean_y = 0.5;
  // sigma^2 per axis.
  double variance_x = 0.01;
  double variance_y = 0.01;
  double weight = 1.0;
};

struct DensitySpec {
  enum class Kind { gaussian, mixture, uniform, image, csv };

  Kind kind = Kind::gaussian;
  // gaussian uses the first component only.
  std::vector<GaussianComponent> components;
  std::string path;
  double scale = 1.0;

  static DensitySpec gaussian(double mean, double variance, double scale = 1.0);
  static DensitySpec gaussian_2d(double mean_x, double mean_y, double variance, double scale = 1.0);
  static DensitySpec uniform(double scale);

  // Throws std::invalid_argument naming the offending field.
  void validate(int dims) const;
};

const char *to_string(DensitySpec::Kind kind);
DensitySpec::Kind density_kind_from_string(const std::string &name);

// Each Gaussian component is normalized to unit discrete mass before being
// weighted; the result is multiplied by the scale. For uniform, the slice is
// the constant `scale`.
SpatialField make_density(const DensitySpec &spec, const SpatialGrid &grid);

// PGM (P2 or P5) resampled by nearest neighbour onto the grid, pixel range
// [0, maxval] mapped linearly to [0, scale]. Image row r maps to cell row
// j = r. A 1D grid reads the first image row.
SpatialField load_grayscale(const std::string &path, const SpatialGrid &grid, double scale);

// Comma-separated matrix, one line per row, no header. Resampled like
// images, values multiplied by scale.
SpatialField load_csv_density(const std::string &path, const SpatialGrid &grid, double scale);

// Slice k is (1 - t_k) mu0 + t_k mu1 at t_k = (k + 1/2) dt.
CellField linear_path(const SpatialField &mu0, const SpatialField &mu1, const TimeGrid &time);

} // namespace uot
