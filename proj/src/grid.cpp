#include "uot/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace uot {

namespace {

void require_slab(int k, int nt) {
  if (k < 0 || k >= nt) {
    throw std::out_of_range("time index " + std::to_string(k) + " outside [0, " +
                            std::to_string(nt) + ")");
  }
}

void require_same_shape(const CellField &a, const CellField &b) {
  if (!(a.space() == b.space()) || !(a.time() == b.time())) {
    throw std::invalid_argument("cell field shape mismatch");
  }
}

} // namespace

SpatialGrid::SpatialGrid(int nx) : dims_(1), nx_(nx), ny_(1), dx_(0.0), dy_(1.0) {
  if (nx < 2) {
    throw std::invalid_argument("n_x must be at least 2, got " + std::to_string(nx));
  }
  dx_ = 1.0 / nx;
}

SpatialGrid::SpatialGrid(int nx, int ny) : dims_(2), nx_(nx), ny_(ny), dx_(0.0), dy_(0.0) {
  if (nx < 2) {
    throw std::invalid_argument("n_x must be at least 2, got " + std::to_string(nx));
  }
  if (ny < 2) {
    throw std::invalid_argument("n_y must be at least 2, got " + std::to_string(ny));
  }
  dx_ = 1.0 / nx;
  dy_ = 1.0 / ny;
}

TimeGrid::TimeGrid(int nt) : nt_(nt), dt_(0.0) {
  if (nt < 2) {
    throw std::invalid_argument("n_t must be at least 2, got " + std::to_string(nt));
  }
  dt_ = 1.0 / nt;
}

SpatialField::SpatialField(const SpatialGrid &grid, double value)
    : grid_(grid), values_(grid.cell_count(), value) {}

SpatialField::SpatialField(const SpatialGrid &grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.cell_count()) {
    throw std::invalid_argument("spatial field has " + std::to_string(values_.size()) +
                                " values, grid needs " + std::to_string(grid_.cell_count()));
  }
}

CellField::CellField(const SpatialGrid &space, const TimeGrid &time, double value)
    : space_(space), time_(time),
      values_(space.cell_count() * static_cast<std::size_t>(time.nt()), value) {}

std::span<double> CellField::slice(int k) {
  require_slab(k, nt());
  return std::span<double>(values_).subspan(static_cast<std::size_t>(k) * space_.cell_count(),
                                            space_.cell_count());
}

std::span<const double> CellField::slice(int k) const {
  require_slab(k, nt());
  return std::span<const double>(values_).subspan(
      static_cast<std::size_t>(k) * space_.cell_count(), space_.cell_count());
}

void CellField::set_slice(int k, std::span<const double> values) {
  auto dst = slice(k);
  if (values.size() != dst.size()) {
    throw std::invalid_argument("slice size mismatch");
  }
  std::copy(values.begin(), values.end(), dst.begin());
}

SpatialField CellField::slice_field(int k) const {
  auto s = slice(k);
  return SpatialField(space_, std::vector<double>(s.begin(), s.end()));
}

FaceField::FaceField(const SpatialGrid &space, const TimeGrid &time)
    : space_(space), time_(time),
      x_(space.x_face_count() * static_cast<std::size_t>(time.nt()), 0.0),
      y_(space.y_face_count() * static_cast<std::size_t>(time.nt()), 0.0) {}

std::span<double> FaceField::x_slice(int k) {
  require_slab(k, nt());
  return std::span<double>(x_).subspan(static_cast<std::size_t>(k) * space_.x_face_count(),
                                       space_.x_face_count());
}

std::span<const double> FaceField::x_slice(int k) const {
  require_slab(k, nt());
  return std::span<const double>(x_).subspan(
      static_cast<std::size_t>(k) * space_.x_face_count(), space_.x_face_count());
}

std::span<double> FaceField::y_slice(int k) {
  require_slab(k, nt());
  return std::span<double>(y_).subspan(static_cast<std::size_t>(k) * space_.y_face_count(),
                                       space_.y_face_count());
}

std::span<const double> FaceField::y_slice(int k) const {
  require_slab(k, nt());
  return std::span<const double>(y_).subspan(
      static_cast<std::size_t>(k) * space_.y_face_count(), space_.y_face_count());
}

bool FaceField::boundary_is_zero() const {
  const int nx = space_.nx();
  const int ny = space_.ny();
  for (int k = 0; k < nt(); ++k) {
    for (int j = 0; j < ny; ++j) {
      if (x(k, 0, j) != 0.0 || x(k, nx, j) != 0.0) {
        return false;
      }
    }
    if (space_.dims() == 2) {
      for (int i = 0; i < nx; ++i) {
        if (y(k, i, 0) != 0.0 || y(k, i, ny) != 0.0) {
          return false;
        }
      }
    }
  }
  return true;
}

SourceSeries::SourceSeries(const TimeGrid &time, double value)
    : time_(time), values_(static_cast<std::size_t>(time.nt()), value) {}

SourceSeries::SourceSeries(const TimeGrid &time, std::vector<double> values)
    : time_(time), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(time_.nt())) {
    throw std::invalid_argument("source series length " + std::to_string(values_.size()) +
                                " does not match n_t = " + std::to_string(time_.nt()));
  }
}

void grad(const CellField &phi, int k, FaceField &out) {
  require_slab(k, phi.nt());
  if (!(phi.space() == out.space()) || phi.nt() != out.nt()) {
    throw std::invalid_argument("grad: field shape mismatch");
  }
  const SpatialGrid &g = phi.space();
  const int nx = g.nx();
  const int ny = g.ny();
  for (int j = 0; j < ny; ++j) {
    auto p = phi.row(k, j);
    auto gx = out.x_row(k, j);
    gx[0] = 0.0;
    gx[nx] = 0.0;
    for (int i = 1; i < nx; ++i) {
      gx[i] = (p[i] - p[i - 1]) / g.dx();
    }
  }
  if (g.dims() == 2) {
    auto first = out.y_row(k, 0);
    auto last = out.y_row(k, ny);
    std::fill(first.begin(), first.end(), 0.0);
    std::fill(last.begin(), last.end(), 0.0);
    for (int j = 1; j < ny; ++j) {
      auto hi = phi.row(k, j);
      auto lo = phi.row(k, j - 1);
      auto gy = out.y_row(k, j);
      for (int i = 0; i < nx; ++i) {
        gy[i] = (hi[i] - lo[i]) / g.dy();
      }
    }
  }
}

FaceField grad(const CellField &phi) {
  FaceField out(phi.space(), phi.time());
  for (int k = 0; k < phi.nt(); ++k) {
    grad(phi, k, out);
  }
  return out;
}

void divergence(const FaceField &m, int k, std::span<double> out) {
  require_slab(k, m.nt());
  const SpatialGrid &g = m.space();
  if (out.size() != g.cell_count()) {
    throw std::invalid_argument("divergence: output slice has wrong size");
  }
  const int nx = g.nx();
  const int ny = g.ny();
  for (int j = 0; j < ny; ++j) {
    auto mx = m.x_row(k, j);
    double *dst = out.data() + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) {
      dst[i] = (mx[i + 1] - mx[i]) / g.dx();
    }
    if (g.dims() == 2) {
      auto lo = m.y_row(k, j);
      auto hi = m.y_row(k, j + 1);
      for (int i = 0; i < nx; ++i) {
        dst[i] += (hi[i] - lo[i]) / g.dy();
      }
    }
  }
}

CellField divergence(const FaceField &m) {
  CellField out(m.space(), m.time());
  for (int k = 0; k < m.nt(); ++k) {
    divergence(m, k, out.slice(k));
  }
  return out;
}

void dt_u(const CellField &u, CellField &out) {
  require_same_shape(u, out);
  const int nt = u.nt();
  const double dt = u.time().dt();
  const std::size_t n = u.space().cell_count();
  for (int k = 0; k < nt; ++k) {
    auto dst = out.slice(k);
    if (k == 0) {
      auto a = u.slice(1);
      auto b = u.slice(0);
      for (std::size_t c = 0; c < n; ++c) dst[c] = (a[c] - b[c]) / dt;
    } else if (k == nt - 1) {
      auto a = u.slice(nt - 1);
      auto b = u.slice(nt - 2);
      for (std::size_t c = 0; c < n; ++c) dst[c] = (a[c] - b[c]) / dt;
    } else {
      auto a = u.slice(k + 1);
      auto b = u.slice(k - 1);
      for (std::size_t c = 0; c < n; ++c) dst[c] = (a[c] - b[c]) / (2.0 * dt);
    }
  }
}

CellField dt_u(const CellField &u) {
  CellField out(u.space(), u.time());
  dt_u(u, out);
  return out;
}

void dt_phi(const CellField &phi, CellField &out) {
  require_same_shape(phi, out);
  const int nt = phi.nt();
  if (nt < 3) {
    throw std::invalid_argument("dt_phi needs n_t >= 3, got " + std::to_string(nt));
  }
  const double dt = phi.time().dt();
  const std::size_t n = phi.space().cell_count();
  // At nt = 3 the middle slab is both k = 1 and k = nt - 2 and the adjoint
  // row is (phi_2 - phi_0) / dt: the -phi_0 term of the first and the +phi_2
  // term of the second.
  for (int k = 0; k < nt; ++k) {
    auto dst = out.slice(k);
    if (nt == 3 && k == 1) {
      auto p0 = phi.slice(0);
      auto p2 = phi.slice(2);
      for (std::size_t c = 0; c < n; ++c) dst[c] = (p2[c] - p0[c]) / dt;
    } else if (k == 0) {
      auto p0 = phi.slice(0);
      auto p1 = phi.slice(1);
      for (std::size_t c = 0; c < n; ++c) dst[c] = (p1[c] / 2.0 + p0[c]) / dt;
    } else if (k == nt - 1) {
      auto last = phi.slice(nt - 1);
      auto prev = phi.slice(nt - 2);
      for (std::size_t c = 0; c < n; ++c) dst[c] = (-last[c] - prev[c] / 2.0) / dt;
    } else if (k == 1) {
      auto p0 = phi.slice(0);
      auto p2 = phi.slice(2);
      for (std::size_t c = 0; c < n; ++c) dst[c] = (p2[c] / 2.0 - p0[c]) / dt;
    } else if (k == nt - 2) {
      auto last = phi.slice(nt - 1);
      auto p3 = phi.slice(nt - 3);
      for (std::size_t c = 0; c < n; ++c) dst[c] = (last[c] - p3[c] / 2.0) / dt;
    } else {
      auto a = phi.slice(k + 1);
      auto b = phi.slice(k - 1);
      for (std::size_t c = 0; c < n; ++c) dst[c] = (a[c] - b[c]) / (2.0 * dt);
    }
  }
}

CellField dt_phi(const CellField &phi) {
  CellField out(phi.space(), phi.time());
  dt_phi(phi, out);
  return out;
}

double integrate(std::span<const double> slice, const SpatialGrid &grid) {
  if (slice.size() != grid.cell_count()) {
    throw std::invalid_argument("integrate: slice size does not match grid");
  }
  double sum = 0.0;
  for (double v : slice) sum += v;
  return sum * grid.cell_measure();
}

double integrate(const SpatialField &field) { return integrate(field.values(), field.grid()); }

double integrate(const SourceSeries &source) {
  double sum = 0.0;
  for (double v : source.values()) sum += v;
  return sum * source.time().dt();
}

std::vector<double> pinned_interval_weights(const TimeGrid &time) {
  std::vector<double> w(static_cast<std::size_t>(time.nt()), time.dt());
  w.front() = 0.5 * time.dt();
  w.back() = 0.5 * time.dt();
  return w;
}

} // namespace uot
