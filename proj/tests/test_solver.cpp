#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "uot/analysis.hpp"
#include "uot/densities.hpp"
#include "uot/solver.hpp"

using namespace uot;

namespace {

SolverConfig small_config(long iterations) {
  SolverConfig c;
  c.max_iterations = iterations;
  c.report_every = 500;
  c.tolerance = 1e-9;
  return c;
}

SpatialField step_density(const SpatialGrid &g, std::mt19937_64 &rng, int pieces) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> levels(pieces);
  for (auto &l : levels) l = u(rng);
  SpatialField f(g);
  for (int i = 0; i < g.nx(); ++i) f(i) = levels[i * pieces / g.nx()];
  return f;
}

} // namespace

TEST_CASE("identical uniform inputs are a fixed point") {
  const SpatialGrid g(8);
  const TimeGrid t(5);
  const SpatialField one(g, 1.0);
  SolverState s = SolverState::initial(one, one, t, false);
  const SolverState before = s;
  pd_step_uw2(s, small_config(1));
  CHECK(std::memcmp(s.mu.values().data(), before.mu.values().data(),
                    s.mu.values().size_bytes()) == 0);
  for (double v : s.m.x_values()) CHECK(v == 0.0);
  for (double v : s.phi.values()) CHECK(v == 0.0);
  for (double v : s.f.values()) CHECK(v == 0.0);
}

TEST_CASE("f-update with spatially constant phi") {
  const SpatialGrid g(6);
  const TimeGrid t(5);
  const SpatialField one(g, 1.0);
  SolverState s = SolverState::initial(one, one, t, false);
  const double c = 0.8;
  for (auto &v : s.phi.values()) v = c;
  for (int k = 0; k < 5; ++k) s.f[k] = 0.1 * k - 0.2;
  const SourceSeries f_old = s.f;
  const SolverConfig cfg = small_config(1);
  pd_step_uw2(s, cfg);
  for (int k = 0; k < 5; ++k) {
    const double want = cfg.alpha / (cfg.alpha + cfg.tau1) * (cfg.tau1 * c + f_old[k]);
    CHECK(s.f[k] == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("mu-update without flux is the positive part") {
  std::mt19937_64 rng(5);
  const SpatialGrid g(10);
  const TimeGrid t(6);
  SolverState s = SolverState::initial(SpatialField(g, 1.0), SpatialField(g, 1.5), t, false);
  std::uniform_real_distribution<double> u(-300.0, 300.0);
  for (auto &v : s.phi.values()) v = u(rng);
  const CellField mu_old = s.mu;
  const CellField g_t = dt_phi(s.phi);
  const SolverConfig cfg = small_config(1);
  pd_step_uw2(s, cfg);
  int clipped = 0;
  for (int k = 1; k + 1 < t.nt(); ++k) {
    for (int i = 0; i < g.nx(); ++i) {
      const double want = std::max(0.0, cfg.tau1 * g_t(k, i) + mu_old(k, i));
      if (want == 0.0) ++clipped;
      CHECK(s.mu(k, i) == doctest::Approx(want).epsilon(1e-12).scale(1e-12));
    }
  }
  CHECK(clipped > 0);
}

TEST_CASE("solver invariants hold along a run") {
  const SpatialGrid g(9, 8);
  const TimeGrid t(6);
  const SpatialField mu0 = make_density(DensitySpec::gaussian_2d(0.3, 0.3, 0.02), g);
  const SpatialField mu1 = make_density(DensitySpec::gaussian_2d(0.7, 0.6, 0.02, 2.0), g);
  SolverState s = SolverState::initial(mu0, mu1, t, false);
  Uw2Stepper stepper(g, t, small_config(1));
  for (int it = 0; it < 400; ++it) {
    stepper.step(s, it);
    if (it % 50 != 0) continue;
    CHECK(s.m.boundary_is_zero());
    for (double v : s.mu.values()) REQUIRE(v >= 0.0);
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      REQUIRE(s.mu.slice(0)[c] == mu0.values()[c]);
      REQUIRE(s.mu.slice(t.nt() - 1)[c] == mu1.values()[c]);
    }
  }
}

TEST_CASE("frozen source stays zero") {
  const SpatialGrid g(12);
  SolverConfig cfg = small_config(200);
  cfg.freeze_source = true;
  const Uw2Result r = solve_uw2(make_density(DensitySpec::gaussian(0.3, 0.01), g),
                                make_density(DensitySpec::gaussian(0.6, 0.01), g), TimeGrid(5),
                                cfg);
  for (double v : r.state.f.values()) CHECK(v == 0.0);
}

TEST_CASE("solves are deterministic") {
  const SpatialGrid g(15);
  const SpatialField a = make_density(DensitySpec::gaussian(0.3, 0.01), g);
  const SpatialField b = make_density(DensitySpec::gaussian(0.7, 0.01, 1.5), g);
  const Uw2Result r1 = solve_uw2(a, b, TimeGrid(7), small_config(700));
  const Uw2Result r2 = solve_uw2(a, b, TimeGrid(7), small_config(700));
  CHECK(std::memcmp(r1.state.phi.values().data(), r2.state.phi.values().data(),
                    r1.state.phi.values().size_bytes()) == 0);
  CHECK(r1.objective == r2.objective);
  REQUIRE(r1.reports.size() == r2.reports.size());
  CHECK(r1.reports.front().iteration == 0);
  CHECK(r1.reports.back().iteration == 700);
}

TEST_CASE("UW2 of identical inputs vanishes") {
  const SpatialGrid g(16);
  const SpatialField a = make_density(DensitySpec::gaussian(0.4, 0.01), g);
  const Uw2Result r = solve_uw2(a, a, TimeGrid(7), small_config(2000));
  CHECK(r.objective <= 1e-4);
  CHECK_FALSE(r.infeasible);
}

TEST_CASE("UW2 configuration is validated") {
  const SpatialGrid g(4);
  SolverConfig cfg = small_config(1);
  cfg.tau1 = 0.0;
  CHECK_THROWS_WITH(solve_uw2(SpatialField(g, 1.0), SpatialField(g, 1.0), TimeGrid(4), cfg),
                    doctest::Contains("tau1"));
  CHECK_THROWS(solve_uw2(SpatialField(g, 1.0), SpatialField(g, 1.0), TimeGrid(2),
                         small_config(1)));
}

TEST_CASE("UW1 examples") {
  const SpatialGrid g(20);
  SolverConfig cfg;
  cfg.p = 1;
  cfg.tau1 = cfg.tau2 = uw1_default_step(g);
  cfg.max_iterations = 20000;
  cfg.report_every = 200;
  cfg.tolerance = 1e-10;

  const SpatialField a = make_density(DensitySpec::gaussian(0.4, 0.01), g);
  const Uw1Result same = solve_uw1(a, a, cfg);
  CHECK(same.value <= 1e-12);
  for (double v : same.mx) CHECK(v == 0.0);

  const Uw1Result shift = solve_uw1(SpatialField(g, 1.0), SpatialField(g, 2.0), cfg);
  CHECK(shift.value == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(shift.source == doctest::Approx(1.0).epsilon(1e-14));
  for (double v : shift.mx) CHECK(std::abs(v) <= 1e-14);
}

TEST_CASE("UW1 matches the closed form on small random pairs") {
  std::mt19937_64 rng(9);
  const SpatialGrid g(24);
  SolverConfig cfg;
  cfg.p = 1;
  cfg.alpha = 10.0;
  cfg.tau1 = cfg.tau2 = uw1_default_step(g);
  cfg.max_iterations = 400000;
  cfg.report_every = 500;
  cfg.tolerance = 1e-11;
  for (int n = 0; n < 4; ++n) {
    const SpatialField a = step_density(g, rng, 4);
    const SpatialField b = step_density(g, rng, 3);
    const Uw1Result r = solve_uw1(a, b, cfg);
    const double want = uw1_closed_form_1d(a, b, cfg.alpha);
    CHECK(r.value == doctest::Approx(want).epsilon(1e-3));
    CHECK(r.constraint_residual <= 1e-6);
  }
}

TEST_CASE("UW1 in 2D") {
  const SpatialGrid g(8, 8);
  SolverConfig cfg;
  cfg.p = 1;
  cfg.tau1 = cfg.tau2 = uw1_default_step(g);
  cfg.max_iterations = 200000;
  cfg.report_every = 500;
  cfg.tolerance = 1e-9;
  const SpatialField a = make_density(DensitySpec::gaussian_2d(0.3, 0.5, 0.01), g);
  const SpatialField b = make_density(DensitySpec::gaussian_2d(0.7, 0.5, 0.01), g);
  const Uw1Result r = solve_uw1(a, b, cfg);
  CHECK(r.my.size() == g.y_face_count());
  CHECK(r.constraint_residual <= 1e-6);
  // Horizontal translation by 0.4 of a unit mass, up to discretization.
  CHECK(r.value == doctest::Approx(0.4).epsilon(0.1));
}

TEST_CASE("closed form") {
  const SpatialGrid g(40);
  const SpatialField a = make_density(DensitySpec::gaussian(0.4, 0.01), g);
  CHECK(uw1_closed_form_1d(a, a, 5.0) == 0.0);
  for (double alpha : {0.5, 100.0}) {
    CHECK(uw1_closed_form_1d(SpatialField(g, 1.0), SpatialField(g, 2.0), alpha) ==
          doctest::Approx(1.0 / alpha).epsilon(1e-12));
  }
  SpatialField left(g), right(g);
  for (int i = 0; i < 40; ++i) (i < 20 ? left : right)(i) = 1.0;
  CHECK(std::abs(uw1_closed_form_1d(left, right, 1.0) - 0.25) <= g.dx());
}
