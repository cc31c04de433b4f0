#include "uot/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace uot {

double solver_cubic_root(double b, double d) {
  if (!(d < 0.0)) {
    return std::max(0.0, -b);
  }
  const double r = std::cbrt(-d);
  double x;
  if (b > 0.0) {
    x = std::min(r, std::sqrt(-d / b));
  } else if (b < 0.0) {
    x = -b + std::min(r, -d / (b * b));
  } else {
    x = r;
  }
  for (int it = 0; it < 100; ++it) {
    const double fx = (x + b) * x * x + d;
    if (fx <= 0.0) {
      break;
    }
    const double fp = (3.0 * x + 2.0 * b) * x;
    const double step = fx / fp;
    x -= step;
    if (step <= 1e-16 * x) {
      break;
    }
  }
  return x;
}

namespace {

void flux_prox(const double *mu_hi, const double *mu_lo, const double *phi_hi,
               const double *phi_lo, const double *m_old, double *m_new, std::size_t n,
               double tau, double inv_h) {
  for (std::size_t f = 0; f < n; ++f) {
    const double w = mu_hi[f] + mu_lo[f];
    const double g = (phi_hi[f] - phi_lo[f]) * inv_h;
    m_new[f] = w / (w + 2.0 * tau) * (tau * g + m_old[f]);
  }
}

void density_prox(const double *mu_old, const double *dt_phi, const double *mx,
                  const double *my_lo, const double *my_hi, double *mu_new, std::size_t n,
                  double tau) {
  const double c = tau / 8.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sx = mx[i] + mx[i + 1];
    double q = sx * sx;
    if (my_lo != nullptr) {
      const double sy = my_lo[i] + my_hi[i];
      q += sy * sy;
    }
    const double b = -(tau * dt_phi[i] + mu_old[i]);
    mu_new[i] = solver_cubic_root(b, -c * q);
  }
}

void extrapolate(const double *next, const double *prev, double *out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = 2.0 * next[i] - prev[i];
  }
}

void dual_ascent(double *phi, const double *u_hi, const double *u_lo, double dt_coef,
                 const double *mx, double inv_dx, const double *my_lo, const double *my_hi,
                 double inv_dy, double source, double tau, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double r = (u_hi[i] - u_lo[i]) * dt_coef + (mx[i + 1] - mx[i]) * inv_dx;
    if (my_lo != nullptr) {
      r += (my_hi[i] - my_lo[i]) * inv_dy;
    }
    phi[i] += tau * (r - source);
  }
}

} // namespace

const KernelTable &scalar_kernels() {
  static const KernelTable table{"scalar", flux_prox, density_prox, extrapolate, dual_ascent};
  return table;
}

} // namespace uot
