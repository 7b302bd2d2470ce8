#pragma once

#include <string>
#include <vector>

#include "vtrack/model.hpp"

namespace vtrack {

// Reference surge force and yaw moment in normalized units, given as knots in
// scaled time. Values are linearly interpolated between knots and held
// constant outside them. A single knot is a constant input.
class ReferenceInput {
 public:
  struct Knot {
    double s = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;

    bool operator==(const Knot&) const = default;
  };

  ReferenceInput() = default;
  explicit ReferenceInput(std::vector<Knot> knots);

  static ReferenceInput constant(double tau1, double tau2);

  ControlInput at(double s) const;
  const std::vector<Knot>& knots() const noexcept { return knots_; }
  bool is_constant() const noexcept { return knots_.size() == 1; }

  // Largest |tau1| and |tau2| over all knots (the interpolant cannot exceed them).
  double peak_tau1() const;
  double peak_tau2() const;

  bool operator==(const ReferenceInput&) const = default;

 private:
  std::vector<Knot> knots_{Knot{}};
};

// Throws AssumptionViolation if any knot exceeds the ceilings.
void check_input_bounds(const ReferenceInput& input, const ActuatorLimits& limits);

struct ReferenceTrajectory {
  ScaledParams params;
  ReferenceInput input;
  ActuatorLimits limits;
  std::vector<double> s;
  std::vector<VesselState> states;
};

// Integrates the virtual vessel with fixed-step RK4 under the reference input.
// The input is evaluated at every stage; the dynamics are normalized_derivative.
ReferenceTrajectory generate_reference(const ReferenceInput& input, const VesselState& init,
                                       const ScaledParams& sp, const ActuatorLimits& limits,
                                       double horizon, double step);

enum class HeadingFlag { kOk, kLikelyViolated };

std::string to_string(HeadingFlag flag);

struct Assumption1Report {
  double max_abs_u = 0.0;
  double max_abs_v = 0.0;
  double max_abs_tau1 = 0.0;
  double max_abs_tau2 = 0.0;
  // Velocity bound used for |u| and |v|: the certified radius for tau1_max.
  double velocity_bound = 0.0;
  bool velocities_within_bound = false;
  bool inputs_within_bound = false;
  double window = 0.0;
  // Total variation of psi_re over the trailing window.
  double trailing_heading_variation = 0.0;
  double variation_threshold = 0.0;
  HeadingFlag heading = HeadingFlag::kOk;
};

// Heuristic witness for a non-convergent reference heading: flags
// kLikelyViolated when psi_re moves less than `threshold` radians over the
// trailing `window`. Divergence cannot be certified from a finite trace.
// Throws std::invalid_argument when window <= 0 or exceeds the trajectory span.
Assumption1Report check_assumption1(const ReferenceTrajectory& traj, double window,
                                    double threshold = 1e-2);

}  // namespace vtrack
