#include "uot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "uot/analysis.hpp"

namespace uot {

namespace {

bool all_finite(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return std::isfinite(s);
}

void require_endpoints(const SpatialField &mu0, const SpatialField &mu1) {
  if (!(mu0.grid() == mu1.grid())) {
    throw std::invalid_argument("endpoint densities have different shapes");
  }
  for (const SpatialField *mu : {&mu0, &mu1}) {
    for (double v : mu->values()) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("endpoint densities must be finite and nonnegative");
      }
    }
  }
}

} // namespace

void SolverConfig::validate() const {
  if (p != 1 && p != 2) throw std::invalid_argument("p must be 1 or 2, got " + std::to_string(p));
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be > 0");
  if (!(tau1 > 0.0) || !std::isfinite(tau1)) throw std::invalid_argument("tau1 must be > 0");
  if (!(tau2 > 0.0) || !std::isfinite(tau2)) throw std::invalid_argument("tau2 must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (report_every < 1) throw std::invalid_argument("report_every must be >= 1");
}

SolverState SolverState::initial(const SpatialField &mu0, const SpatialField &mu1,
                                 const TimeGrid &time, bool freeze_source) {
  require_endpoints(mu0, mu1);
  const SpatialGrid &space = mu0.grid();
  CellField mu = linear_path(mu0, mu1, time);
  mu.set_slice(0, mu0.values());
  mu.set_slice(time.nt() - 1, mu1.values());
  // Spread M1 - M0 over the pinned interval, whose length is (nt - 1) dt.
  const double f0 =
      freeze_source ? 0.0 : (integrate(mu1) - integrate(mu0)) / ((time.nt() - 1) * time.dt());
  SolverState s{FaceField(space, time), mu, SourceSeries(time, f0), CellField(space, time),
                FaceField(space, time), mu, SourceSeries(time, f0)};
  return s;
}

Uw2Stepper::Uw2Stepper(const SpatialGrid &space, const TimeGrid &time,
                       const SolverConfig &config, const KernelTable &kernels)
    : config_(config), kernels_(kernels), m_next_(space, time), mu_next_(space, time),
      f_next_(time), dphi_(space, time) {
  if (time.nt() < 3) {
    throw std::invalid_argument("the UW2 solver needs n_t >= 3");
  }
}

void Uw2Stepper::step(SolverState &s, long iteration) {
  const SpatialGrid &g = s.mu.space();
  const int nt = s.mu.nt();
  const int nx = g.nx();
  const int ny = g.ny();
  const bool two_d = g.dims() == 2;
  const double tau1 = config_.tau1;
  const double tau2 = config_.tau2;
  const double dt = s.mu.time().dt();
  const double inv_dx = 1.0 / g.dx();
  const double inv_dy = 1.0 / g.dy();

  // Flux. Boundary faces of m_next_ are zero from construction and never
  // written.
  for (int k = 0; k < nt; ++k) {
    for (int j = 0; j < ny; ++j) {
      auto mu = s.mu.row(k, j);
      auto phi = s.phi.row(k, j);
      kernels_.flux_prox(mu.data() + 1, mu.data(), phi.data() + 1, phi.data(),
                         s.m.x_row(k, j).data() + 1, m_next_.x_row(k, j).data() + 1,
                         static_cast<std::size_t>(nx - 1), tau1, inv_dx);
    }
    if (two_d) {
      for (int j = 1; j < ny; ++j) {
        kernels_.flux_prox(s.mu.row(k, j).data(), s.mu.row(k, j - 1).data(),
                           s.phi.row(k, j).data(), s.phi.row(k, j - 1).data(),
                           s.m.y_row(k, j).data(), m_next_.y_row(k, j).data(),
                           static_cast<std::size_t>(nx), tau1, inv_dy);
      }
    }
  }
  if (!all_finite(m_next_.x_values()) || !all_finite(m_next_.y_values())) {
    throw DivergenceError("flux (m)", iteration);
  }

  // Density on the free slabs; the pinned ones are copied through.
  dt_phi(s.phi, dphi_);
  mu_next_.set_slice(0, s.mu.slice(0));
  mu_next_.set_slice(nt - 1, s.mu.slice(nt - 1));
  for (int k = 1; k < nt - 1; ++k) {
    for (int j = 0; j < ny; ++j) {
      const double *my_lo = two_d ? s.m.y_row(k, j).data() : nullptr;
      const double *my_hi = two_d ? s.m.y_row(k, j + 1).data() : nullptr;
      kernels_.density_prox(s.mu.row(k, j).data(), dphi_.row(k, j).data(),
                            s.m.x_row(k, j).data(), my_lo, my_hi, mu_next_.row(k, j).data(),
                            static_cast<std::size_t>(nx), tau1);
    }
  }
  if (!all_finite(mu_next_.values())) {
    throw DivergenceError("density (mu)", iteration);
  }

  // Source.
  const double alpha = config_.alpha;
  for (int k = 0; k < nt; ++k) {
    f_next_[k] = config_.freeze_source
                     ? s.f[k]
                     : alpha / (alpha + tau1) * (tau1 * integrate(s.phi.slice(k), g) + s.f[k]);
  }
  if (!all_finite(f_next_.values())) {
    throw DivergenceError("source (f)", iteration);
  }

  // Extrapolation.
  kernels_.extrapolate(m_next_.x_values().data(), s.m.x_values().data(),
                       s.m_bar.x_values().data(), s.m.x_values().size());
  if (two_d) {
    kernels_.extrapolate(m_next_.y_values().data(), s.m.y_values().data(),
                         s.m_bar.y_values().data(), s.m.y_values().size());
  }
  kernels_.extrapolate(mu_next_.values().data(), s.mu.values().data(), s.mu_bar.values().data(),
                       s.mu.values().size());
  for (int k = 0; k < nt; ++k) s.f_bar[k] = 2.0 * f_next_[k] - s.f[k];

  // Dual ascent on the extrapolated point.
  for (int k = 0; k < nt; ++k) {
    int hi = k + 1;
    int lo = k - 1;
    double coef = 1.0 / (2.0 * dt);
    if (k == 0) {
      hi = 1;
      lo = 0;
      coef = 1.0 / dt;
    } else if (k == nt - 1) {
      hi = nt - 1;
      lo = nt - 2;
      coef = 1.0 / dt;
    }
    for (int j = 0; j < ny; ++j) {
      const double *my_lo = two_d ? s.m_bar.y_row(k, j).data() : nullptr;
      const double *my_hi = two_d ? s.m_bar.y_row(k, j + 1).data() : nullptr;
      kernels_.dual_ascent(s.phi.row(k, j).data(), s.mu_bar.row(hi, j).data(),
                           s.mu_bar.row(lo, j).data(), coef, s.m_bar.x_row(k, j).data(), inv_dx,
                           my_lo, my_hi, inv_dy, s.f_bar[k], tau2, static_cast<std::size_t>(nx));
    }
  }
  if (!all_finite(s.phi.values())) {
    throw DivergenceError("potential (phi)", iteration);
  }

  s.m.swap(m_next_);
  s.mu.swap(mu_next_);
  s.f.swap(f_next_);
}

void pd_step_uw2(SolverState &state, const SolverConfig &config) {
  Uw2Stepper stepper(state.mu.space(), state.mu.time(), config);
  stepper.step(state);
}

Uw2Result solve_uw2(const SpatialField &mu0, const SpatialField &mu1, const TimeGrid &time,
                    const SolverConfig &config, const KernelTable &kernels) {
  config.validate();
  if (config.p != 2) {
    throw std::invalid_argument("p: solve_uw2 needs p = 2");
  }
  Uw2Result out{SolverState::initial(mu0, mu1, time, config.freeze_source), {}, 0.0, 0.0,
                false, false, 0};
  Uw2Stepper stepper(mu0.grid(), time, config, kernels);

  auto report = [&](long it) {
    const IterationReport r = make_report(it, out.state, mu0, mu1, config.alpha, config.freeze_source);
    out.reports.push_back(r);
    return std::abs(r.gap) <= config.tolerance * (1.0 + std::abs(r.primal)) &&
           r.continuity_residual <= config.tolerance;
  };

  long it = 0;
  bool converged = report(0);
  while (!converged && it < config.max_iterations) {
    stepper.step(out.state, it + 1);
    ++it;
    if (it % config.report_every == 0 || it == config.max_iterations) {
      converged = report(it);
    }
  }
  out.converged = converged;
  out.iterations_run = it;
  const PrimalObjective p = primal_objective(out.state, config.alpha);
  out.objective = p.value;
  out.infeasible = p.infeasible;
  out.uw2 = std::sqrt(2.0 * std::max(0.0, p.value));
  return out;
}

double uw1_default_step(const SpatialGrid &grid) {
  const double h = std::min(grid.dx(), grid.dims() == 2 ? grid.dy() : grid.dx());
  return grid.dims() == 1 ? h / std::sqrt(8.0) : h / std::sqrt(8.0 + h * h);
}

Uw1Result solve_uw1(const SpatialField &mu0, const SpatialField &mu1, const SolverConfig &config) {
  config.validate();
  require_endpoints(mu0, mu1);
  const SpatialGrid &g = mu0.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const bool two_d = g.dims() == 2;
  const double dx = g.dx();
  const double dy = g.dy();
  const double tau = config.tau1;
  const double sigma = config.tau2;
  const std::size_t ncell = g.cell_count();

  const double delta = integrate(mu1) - integrate(mu0);
  std::vector<double> src(ncell);
  for (std::size_t c = 0; c < ncell; ++c) src[c] = mu1.values()[c] - mu0.values()[c] - delta;

  Uw1Result out{std::vector<double>(g.x_face_count(), 0.0),
                std::vector<double>(g.y_face_count(), 0.0),
                SpatialField(g),
                0.0,
                delta,
                0.0,
                false,
                0,
                {}};
  std::vector<double> &mx = out.mx;
  std::vector<double> &my = out.my;
  std::span<double> phi = out.phi.values();
  std::vector<double> mx_old(mx.size()), my_old(my.size());
  std::vector<double> mx_bar(mx.size(), 0.0), my_bar(my.size(), 0.0);
  std::vector<double> qx(two_d ? ncell : 0, 0.0), qy(two_d ? ncell : 0, 0.0);
  std::vector<double> res(ncell);

  auto xi = [&](int i, int j) { return static_cast<std::size_t>(j) * (nx + 1) + i; };
  auto yi = [&](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
  auto ci = [&](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };

  auto constraint = [&](const std::vector<double> &ax, const std::vector<double> &ay,
                        std::vector<double> &r) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        double d = (ax[xi(i + 1, j)] - ax[xi(i, j)]) / dx;
        if (two_d) d += (ay[yi(i, j + 1)] - ay[yi(i, j)]) / dy;
        r[ci(i, j)] = d + src[ci(i, j)];
      }
    }
  };

  auto value_of = [&]() {
    double v = 0.0;
    if (!two_d) {
      for (int i = 1; i < nx; ++i) v += std::abs(mx[i]) * dx;
    } else {
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          const double ax = 0.5 * (mx[xi(i, j)] + mx[xi(i + 1, j)]);
          const double ay = 0.5 * (my[yi(i, j)] + my[yi(i, j + 1)]);
          v += std::hypot(ax, ay) * dx * dy;
        }
      }
    }
    return v + std::abs(delta) / config.alpha;
  };

  auto residual_norm = [&]() {
    constraint(mx, my, res);
    double s = 0.0;
    for (double r : res) s += r * r;
    return std::sqrt(s * g.cell_measure());
  };

  double last_value = value_of();
  long it = 0;
  bool converged = false;
  while (it < config.max_iterations) {
    mx_old = mx;
    my_old = my;
    for (int j = 0; j < ny; ++j) {
      for (int i = 1; i < nx; ++i) {
        const double grad = (phi[ci(i, j)] - phi[ci(i - 1, j)]) / dx;
        double &m = mx[xi(i, j)];
        if (!two_d) {
          const double v = m + tau * grad;
          m = std::copysign(std::max(std::abs(v) - tau, 0.0), v);
        } else {
          m += tau * (grad - 0.5 * (qx[ci(i - 1, j)] + qx[ci(i, j)]));
        }
      }
    }
    if (two_d) {
      for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          const double grad = (phi[ci(i, j)] - phi[ci(i, j - 1)]) / dy;
          my[yi(i, j)] += tau * (grad - 0.5 * (qy[ci(i, j - 1)] + qy[ci(i, j)]));
        }
      }
    }
    for (std::size_t n = 0; n < mx.size(); ++n) mx_bar[n] = 2.0 * mx[n] - mx_old[n];
    for (std::size_t n = 0; n < my.size(); ++n) my_bar[n] = 2.0 * my[n] - my_old[n];

    if (two_d) {
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          const std::size_t c = ci(i, j);
          const double ax = qx[c] + sigma * 0.5 * (mx_bar[xi(i, j)] + mx_bar[xi(i + 1, j)]);
          const double ay = qy[c] + sigma * 0.5 * (my_bar[yi(i, j)] + my_bar[yi(i, j + 1)]);
          const double scale = std::max(1.0, std::hypot(ax, ay));
          qx[c] = ax / scale;
          qy[c] = ay / scale;
        }
      }
    }
    constraint(mx_bar, my_bar, res);
    for (std::size_t c = 0; c < ncell; ++c) phi[c] += sigma * res[c];
    ++it;

    if (it % config.report_every == 0 || it == config.max_iterations) {
      if (!all_finite(mx) || !all_finite(my) || !all_finite(phi)) {
        throw DivergenceError("UW1 primal-dual", it);
      }
      const double v = value_of();
      const double r = residual_norm();
      out.reports.push_back({it, v, r});
      if (r <= config.tolerance && std::abs(v - last_value) <= config.tolerance * (1.0 + v)) {
        converged = true;
        break;
      }
      last_value = v;
    }
  }
  out.value = value_of();
  out.constraint_residual = residual_norm();
  out.converged = converged;
  out.iterations_run = it;
  return out;
}

double uw1_closed_form_1d(const SpatialField &mu0, const SpatialField &mu1, double alpha) {
  if (!(mu0.grid() == mu1.grid()) || mu0.grid().dims() != 1) {
    throw std::invalid_argument("uw1_closed_form_1d: needs two 1D slices of equal length");
  }
  const SpatialGrid &g = mu0.grid();
  const int nx = g.nx();
  const double dx = g.dx();
  const double delta = integrate(mu1) - integrate(mu0);
  double f0 = 0.0;
  double f1 = 0.0;
  double sum = 0.0;
  for (int i = 1; i < nx; ++i) {
    f0 += mu0(i - 1) * dx;
    f1 += mu1(i - 1) * dx;
    sum += std::abs(f1 - f0 - i * dx * delta) * dx;
  }
  return sum + std::abs(delta) / alpha;
}

} // namespace uot
