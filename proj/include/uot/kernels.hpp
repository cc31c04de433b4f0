#pragma once

// Row kernels for the UW2 primal-dual step. Each backend provides the same
// table; the scalar one is the reference.

#include <cstddef>

namespace uot {

struct KernelTable {
  const char *name;

  // Face flux prox over n faces. Face f sits between cells lo[f] and hi[f]:
  //   w = mu_hi + mu_lo
  //   m_new = w / (w + 2 tau) * (tau * (phi_hi - phi_lo) * inv_h + m_old)
  void (*flux_prox)(const double *mu_hi, const double *mu_lo, const double *phi_hi,
                    const double *phi_lo, const double *m_old, double *m_new, std::size_t n,
                    double tau, double inv_h);

  // Density prox over a row of n cells: largest root of
  //   x^3 - (tau * dt_phi + mu_old) x^2 - tau/8 ((mx[i] + mx[i+1])^2 + (my_lo + my_hi)^2)
  // mx holds n + 1 faces; my_lo / my_hi may both be null (1D).
  void (*density_prox)(const double *mu_old, const double *dt_phi, const double *mx,
                       const double *my_lo, const double *my_hi, double *mu_new, std::size_t n,
                       double tau);

  // out = 2 next - prev.
  void (*extrapolate)(const double *next, const double *prev, double *out, std::size_t n);

  // phi += tau ((u_hi - u_lo) dt_coef + (mx[i+1] - mx[i]) inv_dx
  //             + (my_hi - my_lo) inv_dy - source)
  // my_lo / my_hi may both be null (1D).
  void (*dual_ascent)(double *phi, const double *u_hi, const double *u_lo, double dt_coef,
                      const double *mx, double inv_dx, const double *my_lo, const double *my_hi,
                      double inv_dy, double source, double tau, std::size_t n);
};

const KernelTable &scalar_kernels();
// Null when the binary was built without the AVX2 translation unit.
const KernelTable *avx2_kernels();

// Picks AVX2 when the CPU supports it, unless UOT_KERNELS=scalar.
const KernelTable &active_kernels();

// Largest real root of x^3 + b x^2 + d with d <= 0. Newton from an upper
// bound; the iteration decreases monotonically onto the root.
double solver_cubic_root(double b, double d);

} // namespace uot
