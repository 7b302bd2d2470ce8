#pragma once

#include <cmath>
#include <utility>

#include "vtrack/errors.hpp"

namespace vtrack {

// States leaving this magnitude are treated as divergent.
inline constexpr double kDivergenceLimit = 1e9;

template <class Vec>
bool within_divergence_guard(const Vec& x) {
  for (int i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x(i)) || std::abs(x(i)) > kDivergenceLimit) return false;
  }
  return true;
}

// One classical Runge-Kutta step of dx/ds = f(s, x). Inputs that should be
// held over the step (zero-order hold) are bound into f by the caller; inputs
// that depend on the state are re-evaluated at each stage.
//
// Throws DivergenceError if any stage derivative or the result is non-finite,
// or the result leaves kDivergenceLimit.
template <class Vec, class Derivative>
Vec integrate_rk4(Derivative&& f, double s, const Vec& x, double h) {
  auto checked = [s](Vec k) {
    if (!k.allFinite()) throw DivergenceError("non-finite derivative", s);
    return k;
  };
  const Vec k1 = checked(f(s, x));
  const Vec k2 = checked(f(s + 0.5 * h, Vec(x + (0.5 * h) * k1)));
  const Vec k3 = checked(f(s + 0.5 * h, Vec(x + (0.5 * h) * k2)));
  const Vec k4 = checked(f(s + h, Vec(x + h * k3)));
  Vec next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!within_divergence_guard(next)) throw DivergenceError("state left divergence guard", s + h);
  return next;
}

}  // namespace vtrack
