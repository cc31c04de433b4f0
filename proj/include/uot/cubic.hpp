#pragma once

namespace uot {

// Largest real root of a x^3 + b x^2 + c x + d. Closed form (trigonometric
// or Cardano), then Newton polishing. Throws std::invalid_argument if a == 0.
double root_plus(double a, double b, double c, double d);

} // namespace uot
