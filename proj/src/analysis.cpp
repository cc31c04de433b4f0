#include "uot/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uot {

namespace {

// 1/2 |grad phi_k|^2 per cell, averaging the squares of opposing faces.
void half_grad_sq(const CellField &phi, int k, std::span<double> out) {
  const SpatialGrid &g = phi.space();
  const int nx = g.nx();
  const int ny = g.ny();
  auto p = phi.slice(k);
  auto at = [&](int i, int j) { return p[static_cast<std::size_t>(j) * nx + i]; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double a = i > 0 ? (at(i, j) - at(i - 1, j)) / g.dx() : 0.0;
      const double b = i < nx - 1 ? (at(i + 1, j) - at(i, j)) / g.dx() : 0.0;
      double s = 0.5 * (a * a + b * b);
      if (g.dims() == 2) {
        const double c = j > 0 ? (at(i, j) - at(i, j - 1)) / g.dy() : 0.0;
        const double d = j < ny - 1 ? (at(i, j + 1) - at(i, j)) / g.dy() : 0.0;
        s += 0.5 * (c * c + d * d);
      }
      out[static_cast<std::size_t>(j) * nx + i] = 0.5 * s;
    }
  }
}

double linear_interp(std::span<const double> xs, std::span<const double> ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

} // namespace

PrimalObjective primal_objective(const FaceField &m, const CellField &mu, const SourceSeries &f,
                                 double alpha) {
  const SpatialGrid &g = mu.space();
  const int nx = g.nx();
  const int ny = g.ny();
  PrimalObjective out;
  double kinetic = 0.0;
  for (int k = 0; k < mu.nt(); ++k) {
    for (int j = 0; j < ny; ++j) {
      auto mx = m.x_row(k, j);
      auto row = mu.row(k, j);
      for (int i = 0; i < nx; ++i) {
        const double cx = 0.5 * (mx[i] + mx[i + 1]);
        double sq = cx * cx;
        if (g.dims() == 2) {
          const double cy = 0.5 * (m.y(k, i, j) + m.y(k, i, j + 1));
          sq += cy * cy;
        }
        if (row[i] < kEmptyDensity) {
          if (std::sqrt(sq) >= kEmptyDensity) {
            out.infeasible = true;
          }
          continue;
        }
        kinetic += sq / row[i];
      }
    }
  }
  kinetic *= 0.5 * g.cell_measure() * mu.time().dt();
  double source = 0.0;
  for (double v : f.values()) source += v * v;
  source *= mu.time().dt() / (2.0 * alpha);
  out.value = out.infeasible ? std::numeric_limits<double>::infinity() : kinetic + source;
  return out;
}

PrimalObjective primal_objective(const SolverState &state, double alpha) {
  return primal_objective(state.m, state.mu, state.f, alpha);
}

double dual_objective(const CellField &phi, const SpatialField &mu0, const SpatialField &mu1,
                      double alpha) {
  if (!(mu0.grid() == phi.space()) || !(mu1.grid() == phi.space())) {
    throw std::invalid_argument("dual_objective: endpoint shape mismatch");
  }
  const int nt = phi.nt();
  const double dt = phi.time().dt();
  const SpatialGrid &g = phi.space();
  const CellField dphi = dt_phi(phi);
  std::vector<double> h(g.cell_count());
  double value = 0.0;
  for (int e = 0; e < 2; ++e) {
    const int k = e == 0 ? 0 : nt - 1;
    const auto mu = e == 0 ? mu0.values() : mu1.values();
    half_grad_sq(phi, k, h);
    auto d = dphi.slice(k);
    double s = 0.0;
    for (std::size_t c = 0; c < h.size(); ++c) s += mu[c] * (d[c] + h[c]);
    value -= s * g.cell_measure() * dt;
  }
  double penalty = 0.0;
  for (int k = 0; k < nt; ++k) {
    const double s = integrate(phi.slice(k), g);
    penalty += s * s;
  }
  return value - 0.5 * alpha * penalty * dt;
}

double duality_gap(const SolverState &state, const SpatialField &mu0, const SpatialField &mu1,
                   double alpha) {
  return primal_objective(state, alpha).value - dual_objective(state.phi, mu0, mu1, alpha);
}

double continuity_residual(const FaceField &m, const CellField &mu, const SourceSeries &f) {
  const SpatialGrid &g = mu.space();
  const CellField du = dt_u(mu);
  std::vector<double> div(g.cell_count());
  double sum = 0.0;
  for (int k = 0; k < mu.nt(); ++k) {
    divergence(m, k, div);
    auto d = du.slice(k);
    for (std::size_t c = 0; c < div.size(); ++c) {
      const double r = d[c] + div[c] - f[k];
      sum += r * r;
    }
  }
  return std::sqrt(sum * g.cell_measure() * mu.time().dt());
}

double continuity_residual(const SolverState &state) {
  return continuity_residual(state.m, state.mu, state.f);
}

HjResidual hj_residual(const CellField &phi, const CellField &mu, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("hj_residual: eps must be positive");
  }
  const CellField dphi = dt_phi(phi);
  std::vector<double> h(phi.space().cell_count());
  HjResidual out;
  for (int k = 1; k < phi.nt() - 1; ++k) {
    half_grad_sq(phi, k, h);
    auto d = dphi.slice(k);
    auto m = mu.slice(k);
    for (std::size_t c = 0; c < h.size(); ++c) {
      const double r = d[c] + h[c];
      out.max_violation = std::max(out.max_violation, r);
      if (m[c] > eps) {
        out.max_equality_error = std::max(out.max_equality_error, std::abs(r));
      }
    }
  }
  return out;
}

MassIdentities mass_identities(const SolverState &state, const SpatialField &mu0,
                               const SpatialField &mu1, double alpha) {
  const TimeGrid &time = state.mu.time();
  const auto w = pinned_interval_weights(time);
  const double target = integrate(mu1) - integrate(mu0);
  double sf = 0.0;
  double sphi = 0.0;
  for (int k = 0; k < time.nt(); ++k) {
    sf += w[k] * state.f[k];
    sphi += w[k] * integrate(state.phi.slice(k), state.phi.space());
  }
  return {sf - target, alpha * sphi - target};
}

PushforwardResidual pushforward_residual_1d(const SolverState &state, const SpatialField &mu0,
                                            const SpatialField &mu1) {
  const SpatialGrid &g = state.phi.space();
  if (g.dims() != 1) {
    throw std::invalid_argument("pushforward_residual_1d needs a 1D grid");
  }
  const int nx = g.nx();
  const int nt = state.phi.nt();
  const double dx = g.dx();
  const double dt = state.phi.time().dt();

  std::vector<double> xc(nx);
  for (int i = 0; i < nx; ++i) xc[i] = g.x_center(i);

  std::vector<double> X = xc;
  std::vector<double> v(nx);
  for (int k = 0; k + 1 < nt; ++k) {
    auto p = state.phi.slice(k);
    for (int i = 0; i < nx; ++i) {
      const double a = i > 0 ? (p[i] - p[i - 1]) / dx : 0.0;
      const double b = i < nx - 1 ? (p[i + 1] - p[i]) / dx : 0.0;
      v[i] = 0.5 * (a + b);
    }
    for (int i = 0; i < nx; ++i) X[i] += dt * linear_interp(xc, v, X[i]);
  }

  std::vector<double> dM(nx);
  dM[0] = (X[1] - X[0]) / dx;
  dM[nx - 1] = (X[nx - 1] - X[nx - 2]) / dx;
  for (int i = 1; i < nx - 1; ++i) dM[i] = (X[i + 1] - X[i - 1]) / (2.0 * dx);

  const auto w = pinned_interval_weights(state.phi.time());
  PushforwardResidual out;
  int excluded = 0;
  for (int i = 0; i < nx; ++i) {
    if (X[i] < xc.front() || X[i] > xc.back()) {
      ++excluded;
      continue;
    }
    double src = 0.0;
    for (int k = 0; k < nt; ++k) {
      const double s = static_cast<double>(k) / (nt - 1);
      src += w[k] * state.f[k] * (s * dM[i] + 1.0 - s);
    }
    const double r = linear_interp(xc, mu1.values(), X[i]) * dM[i] - mu0(i) - src;
    out.residual += std::abs(r) * dx;
  }
  out.excluded_fraction = static_cast<double>(excluded) / nx;
  return out;
}

Diagnostics diagnose(const SolverState &state, const SpatialField &mu0, const SpatialField &mu1,
                     double alpha, bool frozen_source, double hj_eps) {
  Diagnostics d;
  d.primal = primal_objective(state, alpha);
  d.dual = frozen_source ? dual_objective(state.phi, mu0, mu1, 0.0)
                         : dual_objective(state.phi, mu0, mu1, alpha);
  d.gap = d.primal.value - d.dual;
  d.continuity_residual = continuity_residual(state);
  d.hj = hj_residual(state.phi, state.mu, hj_eps);
  d.mass = mass_identities(state, mu0, mu1, alpha);
  if (state.phi.space().dims() == 1) {
    d.pushforward = pushforward_residual_1d(state, mu0, mu1);
  }
  return d;
}

IterationReport make_report(long iteration, const SolverState &state, const SpatialField &mu0,
                            const SpatialField &mu1, double alpha, bool frozen_source) {
  IterationReport r;
  r.iteration = iteration;
  r.primal = primal_objective(state, alpha).value;
  r.dual = dual_objective(state.phi, mu0, mu1, frozen_source ? 0.0 : alpha);
  r.gap = r.primal - r.dual;
  r.continuity_residual = continuity_residual(state);
  const HjResidual hj = hj_residual(state.phi, state.mu, 1e-3);
  r.hj_violation = hj.max_violation;
  r.hj_equality = hj.max_equality_error;
  const MassIdentities mi = mass_identities(state, mu0, mu1, alpha);
  r.mass_error_f = mi.e1;
  r.mass_error_phi = mi.e2;
  return r;
}

} // namespace uot
