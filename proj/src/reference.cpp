#include "vtrack/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vtrack/errors.hpp"
#include "vtrack/integrator.hpp"

namespace vtrack {

ReferenceInput::ReferenceInput(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw std::invalid_argument("reference input needs at least one knot");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const auto& k = knots_[i];
    if (!std::isfinite(k.s) || !std::isfinite(k.tau1) || !std::isfinite(k.tau2)) {
      throw std::invalid_argument("reference input knot " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(k.s > knots_[i - 1].s)) {
      throw std::invalid_argument("reference input knots must have increasing times");
    }
  }
}

ReferenceInput ReferenceInput::constant(double tau1, double tau2) {
  return ReferenceInput({Knot{0.0, tau1, tau2}});
}

ControlInput ReferenceInput::at(double s) const {
  if (knots_.size() == 1 || s <= knots_.front().s) {
    return {knots_.front().tau1, knots_.front().tau2};
  }
  if (s >= knots_.back().s) return {knots_.back().tau1, knots_.back().tau2};
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), s,
                             [](double t, const Knot& k) { return t < k.s; });
  auto lo = hi - 1;
  const double w = (s - lo->s) / (hi->s - lo->s);
  return {lo->tau1 + w * (hi->tau1 - lo->tau1), lo->tau2 + w * (hi->tau2 - lo->tau2)};
}

double ReferenceInput::peak_tau1() const {
  double m = 0.0;
  for (const auto& k : knots_) m = std::max(m, std::abs(k.tau1));
  return m;
}

double ReferenceInput::peak_tau2() const {
  double m = 0.0;
  for (const auto& k : knots_) m = std::max(m, std::abs(k.tau2));
  return m;
}

void check_input_bounds(const ReferenceInput& input, const ActuatorLimits& limits) {
  if (input.peak_tau1() > limits.tau1_max) {
    throw AssumptionViolation("reference |tau1| = " + std::to_string(input.peak_tau1()) +
                              " exceeds tau1_max = " + std::to_string(limits.tau1_max));
  }
  if (input.peak_tau2() > limits.tau2_max) {
    throw AssumptionViolation("reference |tau2| = " + std::to_string(input.peak_tau2()) +
                              " exceeds tau2_max = " + std::to_string(limits.tau2_max));
  }
}

ReferenceTrajectory generate_reference(const ReferenceInput& input, const VesselState& init,
                                       const ScaledParams& sp, const ActuatorLimits& limits,
                                       double horizon, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  check_input_bounds(input, limits);

  const auto n = static_cast<std::size_t>(std::llround(horizon / step));
  ReferenceTrajectory traj{sp, input, limits, {}, {}};
  traj.s.reserve(n + 1);
  traj.states.reserve(n + 1);

  auto f = [&](double s, const StateVector& x) {
    return to_vector(normalized_derivative(from_vector(x), input.at(s), sp));
  };

  StateVector x = to_vector(init);
  traj.s.push_back(0.0);
  traj.states.push_back(init);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) * step;
    x = integrate_rk4(f, s, x, step);
    traj.s.push_back(static_cast<double>(i + 1) * step);
    traj.states.push_back(from_vector(x));
  }
  return traj;
}

std::string to_string(HeadingFlag flag) {
  return flag == HeadingFlag::kOk ? "OK" : "LIKELY-VIOLATED";
}

Assumption1Report check_assumption1(const ReferenceTrajectory& traj, double window,
                                    double threshold) {
  if (!(window > 0.0)) throw std::invalid_argument("assumption check window must be > 0");
  if (traj.s.size() < 2 || traj.s.back() - traj.s.front() < window) {
    throw std::invalid_argument("trajectory is shorter than the assumption check window");
  }

  Assumption1Report rep;
  rep.window = window;
  rep.variation_threshold = threshold;
  for (const auto& st : traj.states) {
    rep.max_abs_u = std::max(rep.max_abs_u, std::abs(st.u));
    rep.max_abs_v = std::max(rep.max_abs_v, std::abs(st.v));
  }
  rep.max_abs_tau1 = traj.input.peak_tau1();
  rep.max_abs_tau2 = traj.input.peak_tau2();
  rep.velocity_bound = surge_sway_invariant_radius(traj.params, traj.limits.tau1_max);
  const double r0 = std::hypot(traj.states.front().u, traj.states.front().v);
  const double bound = std::max(rep.velocity_bound, r0);
  rep.velocities_within_bound = rep.max_abs_u <= bound && rep.max_abs_v <= bound;
  rep.inputs_within_bound =
      rep.max_abs_tau1 <= traj.limits.tau1_max && rep.max_abs_tau2 <= traj.limits.tau2_max;

  const double start = traj.s.back() - window;
  double variation = 0.0;
  for (std::size_t i = 1; i < traj.s.size(); ++i) {
    if (traj.s[i] <= start) continue;
    variation += std::abs(traj.states[i].psi - traj.states[i - 1].psi);
  }
  rep.trailing_heading_variation = variation;
  rep.heading = variation < threshold ? HeadingFlag::kLikelyViolated : HeadingFlag::kOk;
  return rep;
}

}  // namespace vtrack
