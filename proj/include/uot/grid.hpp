#pragma once

// Staggered space-time grid on [0,1] x [0,1]^d and its exact difference
// operators. Cell quantities (density, potential) are piecewise constant on
// time slab x spatial cell; fluxes live on cell faces with zero-flux
// boundaries.

#include <cstddef>
#include <span>
#include <vector>

namespace uot {

class SpatialGrid {
public:
  // 1D grid on [0,1].
  explicit SpatialGrid(int nx);
  // 2D grid on [0,1]^2.
  SpatialGrid(int nx, int ny);

  int dims() const { return dims_; }
  int nx() const { return nx_; }
  // Always 1 in 1D so that a 1D slice is a single row.
  int ny() const { return ny_; }
  double dx() const { return dx_; }
  // 1 in 1D.
  double dy() const { return dy_; }

  std::size_t cell_count() const { return static_cast<std::size_t>(nx_) * ny_; }
  double cell_measure() const { return dx_ * dy_; }

  // Face counts per time slab.
  std::size_t x_face_count() const { return static_cast<std::size_t>(nx_ + 1) * ny_; }
  std::size_t y_face_count() const {
    return dims_ == 2 ? static_cast<std::size_t>(nx_) * (ny_ + 1) : 0;
  }

  // Cell-center coordinates.
  double x_center(int i) const { return (i + 0.5) * dx_; }
  double y_center(int j) const { return (j + 0.5) * dy_; }

  bool operator==(const SpatialGrid &) const = default;

private:
  int dims_;
  int nx_;
  int ny_;
  double dx_;
  double dy_;
};

// n_t >= 2; operators that need the five-case stencil check for n_t >= 3.
class TimeGrid {
public:
  explicit TimeGrid(int nt);

  int nt() const { return nt_; }
  double dt() const { return dt_; }
  // Midpoint time of slab k.
  double t_mid(int k) const { return (k + 0.5) * dt_; }

  bool operator==(const TimeGrid &) const = default;

private:
  int nt_;
  double dt_;
};

struct SpaceTimeGrid {
  SpatialGrid space;
  TimeGrid time;
};

// A single time slice of a cell quantity, row-major with x fastest.
class SpatialField {
public:
  explicit SpatialField(const SpatialGrid &grid, double value = 0.0);
  SpatialField(const SpatialGrid &grid, std::vector<double> values);

  const SpatialGrid &grid() const { return grid_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  double &operator()(int i, int j = 0) { return values_[index(i, j)]; }
  double operator()(int i, int j = 0) const { return values_[index(i, j)]; }

private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * grid_.nx() + i;
  }

  SpatialGrid grid_;
  std::vector<double> values_;
};

// Cell quantity over all time slabs; time-major storage so that slab k is a
// contiguous SpatialField-shaped block.
class CellField {
public:
  CellField(const SpatialGrid &space, const TimeGrid &time, double value = 0.0);

  const SpatialGrid &space() const { return space_; }
  const TimeGrid &time() const { return time_; }
  int nt() const { return time_.nt(); }

  std::span<double> slice(int k);
  std::span<const double> slice(int k) const;
  std::span<double> row(int k, int j) {
    return slice(k).subspan(static_cast<std::size_t>(j) * space_.nx(), space_.nx());
  }
  std::span<const double> row(int k, int j) const {
    return slice(k).subspan(static_cast<std::size_t>(j) * space_.nx(), space_.nx());
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double &operator()(int k, int i, int j = 0) { return values_[index(k, i, j)]; }
  double operator()(int k, int i, int j = 0) const { return values_[index(k, i, j)]; }

  void set_slice(int k, std::span<const double> values);
  SpatialField slice_field(int k) const;

  void swap(CellField &other) noexcept { values_.swap(other.values_); }

private:
  std::size_t index(int k, int i, int j) const {
    return (static_cast<std::size_t>(k) * space_.ny() + j) * space_.nx() + i;
  }

  SpatialGrid space_;
  TimeGrid time_;
  std::vector<double> values_;
};

// Staggered flux. x-component at faces (k, i-1/2, j), i = 0..nx; y-component
// at faces (k, i, j-1/2), j = 0..ny (empty in 1D). Boundary faces are kept at
// zero by every writer in this library.
class FaceField {
public:
  FaceField(const SpatialGrid &space, const TimeGrid &time);

  const SpatialGrid &space() const { return space_; }
  const TimeGrid &time() const { return time_; }
  int nt() const { return time_.nt(); }

  std::span<double> x_slice(int k);
  std::span<const double> x_slice(int k) const;
  std::span<double> y_slice(int k);
  std::span<const double> y_slice(int k) const;

  // Row j of x-faces: nx + 1 values.
  std::span<double> x_row(int k, int j) {
    return x_slice(k).subspan(static_cast<std::size_t>(j) * (space_.nx() + 1), space_.nx() + 1);
  }
  std::span<const double> x_row(int k, int j) const {
    return x_slice(k).subspan(static_cast<std::size_t>(j) * (space_.nx() + 1), space_.nx() + 1);
  }
  // Row j of y-faces (j = 0..ny): nx values.
  std::span<double> y_row(int k, int j) {
    return y_slice(k).subspan(static_cast<std::size_t>(j) * space_.nx(), space_.nx());
  }
  std::span<const double> y_row(int k, int j) const {
    return y_slice(k).subspan(static_cast<std::size_t>(j) * space_.nx(), space_.nx());
  }

  double &x(int k, int i, int j = 0) { return x_[x_index(k, i, j)]; }
  double x(int k, int i, int j = 0) const { return x_[x_index(k, i, j)]; }
  double &y(int k, int i, int j) { return y_[y_index(k, i, j)]; }
  double y(int k, int i, int j) const { return y_[y_index(k, i, j)]; }

  std::span<double> x_values() { return x_; }
  std::span<const double> x_values() const { return x_; }
  std::span<double> y_values() { return y_; }
  std::span<const double> y_values() const { return y_; }

  // True when every boundary face is exactly zero.
  bool boundary_is_zero() const;

  void swap(FaceField &other) noexcept {
    x_.swap(other.x_);
    y_.swap(other.y_);
  }

private:
  std::size_t x_index(int k, int i, int j) const {
    return (static_cast<std::size_t>(k) * space_.ny() + j) * (space_.nx() + 1) + i;
  }
  std::size_t y_index(int k, int i, int j) const {
    return (static_cast<std::size_t>(k) * (space_.ny() + 1) + j) * space_.nx() + i;
  }

  SpatialGrid space_;
  TimeGrid time_;
  std::vector<double> x_;
  std::vector<double> y_;
};

// Spatially uniform source, one value per time slab.
class SourceSeries {
public:
  explicit SourceSeries(const TimeGrid &time, double value = 0.0);
  SourceSeries(const TimeGrid &time, std::vector<double> values);

  const TimeGrid &time() const { return time_; }
  int size() const { return static_cast<int>(values_.size()); }
  double &operator[](int k) { return values_[static_cast<std::size_t>(k)]; }
  double operator[](int k) const { return values_[static_cast<std::size_t>(k)]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  void swap(SourceSeries &other) noexcept { values_.swap(other.values_); }

private:
  TimeGrid time_;
  std::vector<double> values_;
};

// Face gradient of slab k of phi. Writes all x-faces (and y-faces in 2D) of
// `out` at slab k; boundary faces are set to zero.
void grad(const CellField &phi, int k, FaceField &out);
FaceField grad(const CellField &phi);

// Cell divergence of slab k of m, written to `out` (one slice of cells).
void divergence(const FaceField &m, int k, std::span<double> out);
CellField divergence(const FaceField &m);

// Time derivative of a density-like field: forward / centered / backward.
CellField dt_u(const CellField &u);
void dt_u(const CellField &u, CellField &out);

// Negative adjoint of dt_u under sum_k (.)(.) dt. Requires nt >= 3.
CellField dt_phi(const CellField &phi);
void dt_phi(const CellField &phi, CellField &out);

// Cell-sum quadrature over the unit domain.
double integrate(std::span<const double> slice, const SpatialGrid &grid);
double integrate(const SpatialField &field);
// sum_k f_k dt.
double integrate(const SourceSeries &source);

// Weights of the trapezoid rule over slab midpoints t_0 .. t_{nt-1}: the
// quadrature under which sum_k w_k dt_u(u)_k telescopes to u_{nt-1} - u_0.
std::vector<double> pinned_interval_weights(const TimeGrid &time);

} // namespace uot
