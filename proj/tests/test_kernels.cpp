#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "uot/densities.hpp"
#include "uot/kernels.hpp"
#include "uot/solver.hpp"

using namespace uot;

namespace {

std::vector<double> random_row(std::mt19937_64 &rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto &x : v) x = d(rng);
  return v;
}

bool same_bits(const std::vector<double> &a, const std::vector<double> &b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

const KernelTable *vector_backend() {
  const KernelTable *k = avx2_kernels();
  if (!k) MESSAGE("AVX2 backend not built; equivalence checks skipped");
  return k;
}

} // namespace

TEST_CASE("backend selection") {
  CHECK(std::string(scalar_kernels().name) == "scalar");
  const KernelTable &active = active_kernels();
  CHECK((&active == &scalar_kernels() || &active == avx2_kernels()));
}

TEST_CASE("flux prox matches scalar bit for bit") {
  const KernelTable *v = vector_backend();
  if (!v) return;
  std::mt19937_64 rng(1);
  for (std::size_t n = 0; n < 40; ++n) {
    auto mh = random_row(rng, n, 0.0, 3.0), ml = random_row(rng, n, 0.0, 3.0);
    auto ph = random_row(rng, n, -1, 1), pl = random_row(rng, n, -1, 1);
    auto m = random_row(rng, n, -1, 1);
    std::vector<double> a(n), b(n);
    scalar_kernels().flux_prox(mh.data(), ml.data(), ph.data(), pl.data(), m.data(), a.data(), n,
                               1e-3, 35.0);
    v->flux_prox(mh.data(), ml.data(), ph.data(), pl.data(), m.data(), b.data(), n, 1e-3, 35.0);
    CHECK(same_bits(a, b));
  }
}

TEST_CASE("density prox matches scalar bit for bit") {
  const KernelTable *v = vector_backend();
  if (!v) return;
  std::mt19937_64 rng(2);
  for (std::size_t n = 0; n < 40; ++n) {
    auto mu = random_row(rng, n, 0.0, 2.0);
    auto dphi = random_row(rng, n, -50, 50);
    auto mx = random_row(rng, n + 1, -0.5, 0.5);
    auto ylo = random_row(rng, n, -0.5, 0.5), yhi = random_row(rng, n, -0.5, 0.5);
    if (n > 2) {
      mx[1] = 0.0;
      mx[2] = 0.0;
      mu[1] = 0.0;
    }
    std::vector<double> a(n), b(n), c(n), d(n);
    scalar_kernels().density_prox(mu.data(), dphi.data(), mx.data(), nullptr, nullptr, a.data(),
                                  n, 1e-3);
    v->density_prox(mu.data(), dphi.data(), mx.data(), nullptr, nullptr, b.data(), n, 1e-3);
    CHECK(same_bits(a, b));
    scalar_kernels().density_prox(mu.data(), dphi.data(), mx.data(), ylo.data(), yhi.data(),
                                  c.data(), n, 1e-3);
    v->density_prox(mu.data(), dphi.data(), mx.data(), ylo.data(), yhi.data(), d.data(), n, 1e-3);
    CHECK(same_bits(c, d));
    for (double x : c) CHECK(x >= 0.0);
  }
}

TEST_CASE("extrapolate and dual ascent match scalar bit for bit") {
  const KernelTable *v = vector_backend();
  if (!v) return;
  std::mt19937_64 rng(3);
  for (std::size_t n = 0; n < 40; ++n) {
    auto next = random_row(rng, n, -1, 1), prev = random_row(rng, n, -1, 1);
    std::vector<double> a(n), b(n);
    scalar_kernels().extrapolate(next.data(), prev.data(), a.data(), n);
    v->extrapolate(next.data(), prev.data(), b.data(), n);
    CHECK(same_bits(a, b));

    auto phi = random_row(rng, n, -1, 1);
    auto uh = random_row(rng, n, 0, 1), ul = random_row(rng, n, 0, 1);
    auto mx = random_row(rng, n + 1, -1, 1);
    auto ylo = random_row(rng, n, -1, 1), yhi = random_row(rng, n, -1, 1);
    auto p1 = phi, p2 = phi;
    scalar_kernels().dual_ascent(p1.data(), uh.data(), ul.data(), 7.5, mx.data(), 35.0, nullptr,
                                 nullptr, 0.0, 0.2, 0.1, n);
    v->dual_ascent(p2.data(), uh.data(), ul.data(), 7.5, mx.data(), 35.0, nullptr, nullptr, 0.0,
                   0.2, 0.1, n);
    CHECK(same_bits(p1, p2));
    p1 = phi;
    p2 = phi;
    scalar_kernels().dual_ascent(p1.data(), uh.data(), ul.data(), 7.5, mx.data(), 35.0,
                                 ylo.data(), yhi.data(), 12.0, -0.1, 0.1, n);
    v->dual_ascent(p2.data(), uh.data(), ul.data(), 7.5, mx.data(), 35.0, ylo.data(), yhi.data(),
                   12.0, -0.1, 0.1, n);
    CHECK(same_bits(p1, p2));
  }
}

TEST_CASE("full solves agree across backends") {
  const KernelTable *v = vector_backend();
  if (!v) return;
  SolverConfig cfg;
  cfg.max_iterations = 300;
  cfg.report_every = 100;
  for (bool two_d : {false, true}) {
    const SpatialGrid g = two_d ? SpatialGrid(9, 7) : SpatialGrid(21);
    const SpatialField mu0 = make_density(DensitySpec::gaussian_2d(0.3, 0.4, 0.02), g);
    const SpatialField mu1 = make_density(DensitySpec::gaussian_2d(0.7, 0.6, 0.02, 1.5), g);
    const Uw2Result a = solve_uw2(mu0, mu1, TimeGrid(6), cfg, scalar_kernels());
    const Uw2Result b = solve_uw2(mu0, mu1, TimeGrid(6), cfg, *v);
    CHECK(std::memcmp(a.state.mu.values().data(), b.state.mu.values().data(),
                      a.state.mu.values().size_bytes()) == 0);
    CHECK(std::memcmp(a.state.phi.values().data(), b.state.phi.values().data(),
                      a.state.phi.values().size_bytes()) == 0);
    CHECK(a.objective == b.objective);
  }
}
