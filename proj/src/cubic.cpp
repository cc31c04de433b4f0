#include "uot/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace uot {

namespace {

double largest_closed_form(double b, double c, double d) {
  // Depressed cubic t^3 + p t + q with x = t - b/3.
  const double shift = b / 3.0;
  const double p = c - b * shift;
  const double q = (2.0 * b * b * b) / 27.0 - b * c / 3.0 + d;
  const double half_q = 0.5 * q;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;
  double t;
  if (p == 0.0 && q == 0.0) {
    t = 0.0;
  } else if (disc > 0.0) {
    const double a = -std::copysign(std::cbrt(std::abs(half_q) + std::sqrt(disc)), q);
    t = a != 0.0 ? a - third_p / a : 0.0;
  } else {
    const double r = std::sqrt(-third_p);
    const double arg = std::clamp(-half_q / (r * r * r), -1.0, 1.0);
    t = 2.0 * r * std::cos(std::acos(arg) / 3.0);
  }
  return t - shift;
}

} // namespace

double root_plus(double a, double b, double c, double d) {
  if (a == 0.0) {
    throw std::invalid_argument("root_plus: leading coefficient is zero");
  }
  b /= a;
  c /= a;
  d /= a;
  double x = largest_closed_form(b, c, d);
  auto f = [&](double v) { return ((v + b) * v + c) * v + d; };
  auto fprime = [&](double v) { return (3.0 * v + 2.0 * b) * v + c; };
  double fx = f(x);
  if (fx < 0.0) {
    // Cancellation left x below the largest root, possibly next to a
    // critical point. Newton safeguarded by bisection on [x, Cauchy bound].
    double lo = x;
    double hi = 1.0 + std::max({std::abs(b), std::abs(c), std::abs(d)});
    for (int it = 0; it < 200 && fx != 0.0; ++it) {
      const double fp = fprime(x);
      double next = fp != 0.0 ? x - fx / fp : hi;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (next == x) break;
      const double fn = f(next);
      (fn <= 0.0 ? lo : hi) = next;
      const double step = std::abs(next - x);
      x = next;
      fx = fn;
      if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) break;
    }
    return x;
  }
  for (int it = 0; it < 8 && fx != 0.0; ++it) {
    const double fp = fprime(x);
    if (fp == 0.0) {
      break;
    }
    const double next = x - fx / fp;
    const double fn = f(next);
    if (!(std::abs(fn) < std::abs(fx))) {
      break;
    }
    x = next;
    fx = fn;
  }
  return x;
}

} // namespace uot
