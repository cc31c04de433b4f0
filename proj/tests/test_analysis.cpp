#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "uot/analysis.hpp"
#include "uot/densities.hpp"
#include "uot/solver.hpp"

using namespace uot;

namespace {

SolverState zero_state(const SpatialField &mu0, const SpatialField &mu1, const TimeGrid &t) {
  SolverState s = SolverState::initial(mu0, mu1, t, true);
  return s;
}

} // namespace

TEST_CASE("primal objective") {
  const SpatialGrid g(10);
  const TimeGrid t(5);
  const SpatialField one(g, 1.0);
  SolverState s = zero_state(one, one, t);
  CHECK(primal_objective(s, 100.0).value == 0.0);

  for (int k = 0; k < t.nt(); ++k) {
    for (int i = 1; i < g.nx(); ++i) s.m.x(k, i) = 0.5;
  }
  // Interior cells see 0.5, the two edge cells average 0.5 with a zero
  // boundary face.
  const double want = 0.5 * (8 * 0.25 + 2 * 0.0625) * g.dx();
  CHECK(primal_objective(s, 100.0).value == doctest::Approx(want).epsilon(1e-14));
  CHECK(want == doctest::Approx(0.125).epsilon(0.2));

  s.f = SourceSeries(t, 2.0);
  CHECK(primal_objective(s, 4.0).value == doctest::Approx(want + 4.0 / 8.0).epsilon(1e-14));

  s.mu(2, 3) = 0.0;
  const PrimalObjective bad = primal_objective(s, 4.0);
  CHECK(bad.infeasible);
  CHECK(std::isinf(bad.value));
}

TEST_CASE("dual objective of constant potentials") {
  const SpatialGrid g(12);
  const TimeGrid t(9);
  const SpatialField mu0 = make_density(DensitySpec::gaussian(0.3, 0.01, 2.0), g);
  const SpatialField mu1 = make_density(DensitySpec::gaussian(0.6, 0.01, 0.5), g);
  const double m0 = integrate(mu0), m1 = integrate(mu1);
  const double alpha = 3.0;
  CHECK(dual_objective(CellField(g, t), mu0, mu1, alpha) == 0.0);
  for (double c : {-0.7, 0.25, 2.0}) {
    // The end rows of dt_phi weigh a constant by 3/2 (k = 0: phi_0 + phi_1 / 2).
    const double want = 1.5 * c * (m1 - m0) - 0.5 * alpha * c * c;
    CHECK(dual_objective(CellField(g, t, c), mu0, mu1, alpha) ==
          doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("weak duality on feasible paths") {
  std::mt19937_64 rng(11);
  const SpatialGrid g(14);
  const TimeGrid t(7);
  std::uniform_real_distribution<double> u(0.2, 0.8);
  for (int n = 0; n < 5; ++n) {
    const SpatialField mu0 = make_density(DensitySpec::gaussian(u(rng), 0.02, u(rng) + 0.5), g);
    const SpatialField mu1 = make_density(DensitySpec::gaussian(u(rng), 0.02, u(rng) + 0.5), g);
    SolverState s = SolverState::initial(mu0, mu1, t, false);
    CHECK(duality_gap(s, mu0, mu1, 10.0) >= -1e-12);
  }
  const SpatialField a = make_density(DensitySpec::gaussian(0.4, 0.02), g);
  SolverState same = zero_state(a, a, t);
  CHECK(duality_gap(same, a, a, 10.0) == 0.0);
}

TEST_CASE("continuity residual") {
  const SpatialGrid g(6);
  const TimeGrid t(5);
  SolverState s = zero_state(SpatialField(g, 1.0), SpatialField(g, 2.0), t);
  s.mu = linear_path(SpatialField(g, 1.0), SpatialField(g, 2.0), t);
  s.f = SourceSeries(t, 1.0);
  CHECK(continuity_residual(s) <= 1e-13);

  SolverState flat = zero_state(SpatialField(g, 1.5), SpatialField(g, 1.5), t);
  CHECK(continuity_residual(flat) == 0.0);
  const double delta = 0.3;
  flat.f[2] += delta;
  CHECK(continuity_residual(flat) == doctest::Approx(delta * std::sqrt(t.dt())).epsilon(1e-14));
}

TEST_CASE("Hamilton-Jacobi residual") {
  const SpatialGrid g(8);
  const TimeGrid t(7);
  CellField mu(g, t, 1.0);

  const HjResidual constant = hj_residual(CellField(g, t, 0.4), mu, 1e-3);
  CHECK(constant.max_violation == doctest::Approx(0.5 * 0.4 / t.dt()));

  CellField x(g, t);
  for (int k = 0; k < t.nt(); ++k) {
    for (int i = 0; i < g.nx(); ++i) x(k, i) = g.x_center(i);
  }
  // On slabs 2..nt-3 the time stencil of a time-constant field vanishes and
  // r = |grad|^2 / 2 = 1/2 on cells with two interior faces.
  CellField occupied(g, t, 0.0);
  for (int k = 2; k < t.nt() - 2; ++k) {
    for (int i = 0; i < g.nx(); ++i) occupied(k, i) = 1.0;
  }
  const HjResidual linear = hj_residual(x, occupied, 1e-3);
  CHECK(linear.max_equality_error == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hj_residual(x, CellField(g, t, 0.0), 1e-3).max_equality_error == 0.0);
  CHECK_THROWS(hj_residual(x, mu, 0.0));
}

TEST_CASE("mass identities") {
  const SpatialGrid g(10);
  const TimeGrid t(15);
  const SpatialField mu0 = make_density(DensitySpec::gaussian(0.3, 0.01, 2.0), g);
  const SpatialField mu1 = make_density(DensitySpec::gaussian(0.6, 0.01, 1.0), g);
  const SolverState s = SolverState::initial(mu0, mu1, t, false);
  const MassIdentities mi = mass_identities(s, mu0, mu1, 100.0);
  CHECK(std::abs(mi.e1) <= 1e-14);
  CHECK(mi.e2 == doctest::Approx(1.0));
}

TEST_CASE("push-forward residual") {
  const SpatialGrid g(16);
  const TimeGrid t(7);
  const SpatialField a = make_density(DensitySpec::gaussian(0.5, 0.02), g);
  const SolverState same = zero_state(a, a, t);
  const PushforwardResidual r0 = pushforward_residual_1d(same, a, a);
  CHECK(r0.residual == 0.0);
  CHECK(r0.excluded_fraction == 0.0);

  const SpatialField one(g, 1.0), two(g, 2.0);
  SolverState s = zero_state(one, two, t);
  const auto w = pinned_interval_weights(t);
  double wsum = 0.0;
  for (double x : w) wsum += x;
  s.f = SourceSeries(t, 1.0 / wsum);
  CHECK(pushforward_residual_1d(s, one, two).residual <= 1e-13);
  s.f = SourceSeries(t, 0.6 / wsum);
  CHECK(pushforward_residual_1d(s, one, two).residual == doctest::Approx(0.4).epsilon(1e-12));

  const SolverState two_d = zero_state(SpatialField(SpatialGrid(4, 4), 1.0),
                                       SpatialField(SpatialGrid(4, 4), 1.0), t);
  CHECK_THROWS(pushforward_residual_1d(two_d, SpatialField(SpatialGrid(4, 4), 1.0),
                                       SpatialField(SpatialGrid(4, 4), 1.0)));
}

TEST_CASE("diagnostics of a short run are consistent") {
  const SpatialGrid g(15);
  const SpatialField a = make_density(DensitySpec::gaussian(0.35, 0.01), g);
  const SpatialField b = make_density(DensitySpec::gaussian(0.65, 0.01, 1.3), g);
  SolverConfig cfg;
  cfg.max_iterations = 3000;
  cfg.report_every = 1000;
  const Uw2Result r = solve_uw2(a, b, TimeGrid(7), cfg);
  const Diagnostics d = diagnose(r.state, a, b, cfg.alpha);
  const IterationReport last = r.reports.back();
  CHECK(last.iteration == 3000);
  CHECK(d.primal.value == last.primal);
  CHECK(d.dual == last.dual);
  CHECK(d.gap == last.gap);
  CHECK(d.continuity_residual == last.continuity_residual);
  CHECK(d.mass.e1 == last.mass_error_f);
  CHECK(d.pushforward.has_value());
  CHECK(r.objective == d.primal.value);
}
