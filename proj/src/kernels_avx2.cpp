// Built with -mavx2 and without -mfma, so every lane performs the same
// rounded operations as the scalar reference.

#include "uot/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace uot {

namespace {

constexpr std::size_t kLanes = 4;

void flux_prox(const double *mu_hi, const double *mu_lo, const double *phi_hi,
               const double *phi_lo, const double *m_old, double *m_new, std::size_t n,
               double tau, double inv_h) {
  const __m256d vtau = _mm256_set1_pd(tau);
  const __m256d vtau2 = _mm256_set1_pd(2.0 * tau);
  const __m256d vinv = _mm256_set1_pd(inv_h);
  std::size_t f = 0;
  for (; f + kLanes <= n; f += kLanes) {
    const __m256d w = _mm256_add_pd(_mm256_loadu_pd(mu_hi + f), _mm256_loadu_pd(mu_lo + f));
    const __m256d g = _mm256_mul_pd(
        _mm256_sub_pd(_mm256_loadu_pd(phi_hi + f), _mm256_loadu_pd(phi_lo + f)), vinv);
    const __m256d scale = _mm256_div_pd(w, _mm256_add_pd(w, vtau2));
    const __m256d arg = _mm256_add_pd(_mm256_mul_pd(vtau, g), _mm256_loadu_pd(m_old + f));
    _mm256_storeu_pd(m_new + f, _mm256_mul_pd(scale, arg));
  }
  for (; f < n; ++f) {
    const double w = mu_hi[f] + mu_lo[f];
    const double g = (phi_hi[f] - phi_lo[f]) * inv_h;
    m_new[f] = w / (w + 2.0 * tau) * (tau * g + m_old[f]);
  }
}

// Four independent Newton solves; a lane stops updating exactly where the
// scalar loop would break.
__m256d cubic_root4(__m256d b, __m256d d) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d neg_b = _mm256_sub_pd(zero, b);
  const __m256d neg_d = _mm256_sub_pd(zero, d);

  alignas(32) double nd[kLanes];
  _mm256_store_pd(nd, neg_d);
  const __m256d r = _mm256_set_pd(std::cbrt(nd[3]), std::cbrt(nd[2]), std::cbrt(nd[1]),
                                  std::cbrt(nd[0]));

  const __m256d start_pos = _mm256_min_pd(r, _mm256_sqrt_pd(_mm256_div_pd(neg_d, b)));
  const __m256d start_neg =
      _mm256_add_pd(neg_b, _mm256_min_pd(r, _mm256_div_pd(neg_d, _mm256_mul_pd(b, b))));
  const __m256d b_pos = _mm256_cmp_pd(b, zero, _CMP_GT_OQ);
  const __m256d b_neg = _mm256_cmp_pd(b, zero, _CMP_LT_OQ);
  __m256d x = _mm256_blendv_pd(r, start_pos, b_pos);
  x = _mm256_blendv_pd(x, start_neg, b_neg);

  const __m256d solve = _mm256_cmp_pd(d, zero, _CMP_LT_OQ);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d eps = _mm256_set1_pd(1e-16);
  __m256d active = solve;
  for (int it = 0; it < 100 && _mm256_movemask_pd(active) != 0; ++it) {
    const __m256d fx = _mm256_add_pd(_mm256_mul_pd(_mm256_mul_pd(_mm256_add_pd(x, b), x), x), d);
    active = _mm256_and_pd(active, _mm256_cmp_pd(fx, zero, _CMP_GT_OQ));
    const __m256d fp = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(three, x), _mm256_mul_pd(two, b)), x);
    const __m256d step = _mm256_div_pd(fx, fp);
    x = _mm256_blendv_pd(x, _mm256_sub_pd(x, step), active);
    const __m256d small = _mm256_cmp_pd(step, _mm256_mul_pd(eps, x), _CMP_LE_OQ);
    active = _mm256_andnot_pd(small, active);
  }
  return _mm256_blendv_pd(_mm256_max_pd(neg_b, zero), x, solve);
}

void density_prox(const double *mu_old, const double *dt_phi, const double *mx,
                  const double *my_lo, const double *my_hi, double *mu_new, std::size_t n,
                  double tau) {
  const double c = tau / 8.0;
  const __m256d vtau = _mm256_set1_pd(tau);
  const __m256d vneg_c = _mm256_set1_pd(-c);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d sx = _mm256_add_pd(_mm256_loadu_pd(mx + i), _mm256_loadu_pd(mx + i + 1));
    __m256d q = _mm256_mul_pd(sx, sx);
    if (my_lo != nullptr) {
      const __m256d sy = _mm256_add_pd(_mm256_loadu_pd(my_lo + i), _mm256_loadu_pd(my_hi + i));
      q = _mm256_add_pd(q, _mm256_mul_pd(sy, sy));
    }
    const __m256d b = _mm256_sub_pd(
        zero, _mm256_add_pd(_mm256_mul_pd(vtau, _mm256_loadu_pd(dt_phi + i)),
                            _mm256_loadu_pd(mu_old + i)));
    _mm256_storeu_pd(mu_new + i, cubic_root4(b, _mm256_mul_pd(vneg_c, q)));
  }
  for (; i < n; ++i) {
    const double sx = mx[i] + mx[i + 1];
    double q = sx * sx;
    if (my_lo != nullptr) {
      const double sy = my_lo[i] + my_hi[i];
      q += sy * sy;
    }
    mu_new[i] = solver_cubic_root(-(tau * dt_phi[i] + mu_old[i]), -c * q);
  }
}

void extrapolate(const double *next, const double *prev, double *out, std::size_t n) {
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_mul_pd(two, _mm256_loadu_pd(next + i)),
                                            _mm256_loadu_pd(prev + i)));
  }
  for (; i < n; ++i) {
    out[i] = 2.0 * next[i] - prev[i];
  }
}

void dual_ascent(double *phi, const double *u_hi, const double *u_lo, double dt_coef,
                 const double *mx, double inv_dx, const double *my_lo, const double *my_hi,
                 double inv_dy, double source, double tau, std::size_t n) {
  const __m256d vdt = _mm256_set1_pd(dt_coef);
  const __m256d vdx = _mm256_set1_pd(inv_dx);
  const __m256d vdy = _mm256_set1_pd(inv_dy);
  const __m256d vsrc = _mm256_set1_pd(source);
  const __m256d vtau = _mm256_set1_pd(tau);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d du = _mm256_mul_pd(
        _mm256_sub_pd(_mm256_loadu_pd(u_hi + i), _mm256_loadu_pd(u_lo + i)), vdt);
    const __m256d dx = _mm256_mul_pd(
        _mm256_sub_pd(_mm256_loadu_pd(mx + i + 1), _mm256_loadu_pd(mx + i)), vdx);
    __m256d r = _mm256_add_pd(du, dx);
    if (my_lo != nullptr) {
      r = _mm256_add_pd(r, _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(my_hi + i),
                                                       _mm256_loadu_pd(my_lo + i)),
                                         vdy));
    }
    const __m256d p = _mm256_loadu_pd(phi + i);
    _mm256_storeu_pd(phi + i, _mm256_add_pd(p, _mm256_mul_pd(vtau, _mm256_sub_pd(r, vsrc))));
  }
  for (; i < n; ++i) {
    double r = (u_hi[i] - u_lo[i]) * dt_coef + (mx[i + 1] - mx[i]) * inv_dx;
    if (my_lo != nullptr) {
      r += (my_hi[i] - my_lo[i]) * inv_dy;
    }
    phi[i] += tau * (r - source);
  }
}

} // namespace

const KernelTable *avx2_kernels() {
  static const KernelTable table{"avx2", flux_prox, density_prox, extrapolate, dual_ascent};
  return &table;
}

} // namespace uot
