#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "uot/cubic.hpp"
#include "uot/kernels.hpp"

using namespace uot;

namespace {

// Largest root of x^3 + b x^2 + d, d <= 0. The cubic is increasing from
// max(0, -b) on and not positive there, so the root is bracketed.
double bisect(double b, double d) {
  auto f = [&](double x) { return (x + b) * x * x + d; };
  double lo = std::max(0.0, -b);
  double hi = lo + 1.0;
  while (f(hi) <= 0.0) hi = lo + 2.0 * (hi - lo);
  for (int it = 0; it < 400 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double log_uniform(std::mt19937_64 &rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

} // namespace

TEST_CASE("root_plus examples") {
  CHECK(root_plus(1, -1, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(root_plus(1, 0, 0, -8) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(root_plus(1, -2, 0, -3) - bisect(-2, -3)) <= 1e-12);
  CHECK(std::abs(root_plus(1, -2, 0, -3) - 2.486) <= 5e-4);
  CHECK(root_plus(1, -6, 11, -6) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(root_plus(2, -2, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(root_plus(1, 3, 0, 0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(root_plus(0, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("root_plus against bisection") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int n = 0; n < 1000; ++n) {
    const double b = (sign(rng) ? 1.0 : -1.0) * log_uniform(rng, 1e-6, 1e2);
    const double d = -log_uniform(rng, 1e-12, 1e2);
    const double want = bisect(b, d);
    CHECK(std::abs(root_plus(1.0, b, 0.0, d) - want) <= 1e-10);
    CHECK(std::abs(solver_cubic_root(b, d) - want) <= 1e-10);
  }
}

TEST_CASE("solver_cubic_root edge cases") {
  CHECK(solver_cubic_root(-3.0, 0.0) == 3.0);
  CHECK(solver_cubic_root(2.0, 0.0) == 0.0);
  CHECK(solver_cubic_root(0.0, -27.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(solver_cubic_root(1e8, -1e-30) >= 0.0);
}
