#pragma once

#include <Eigen/Dense>

namespace vtrack {

// Inertia (kg, kg, kg m^2) and linear damping (kg/s, kg/s, kg m^2/s) of a
// diagonal 3-DOF surface vessel.
struct PhysicalParams {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  bool operator==(const PhysicalParams&) const = default;
};

// Rate constants of the physical model:
//   a = d1/m1, b = d2/m2, c = m1/m2, d = d3/m3, kappa = (m1 - m2)/m3.
// kappa carries the sign of m1 - m2.
struct PrimitiveConstants {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double kappa = 0.0;
};

// How the Munk coefficient of the normalized model is obtained from kappa.
//   kConsistent: beta = kappa * c * rho^2, the exact image of kappa*u*v under
//                the velocity scaling u/(d rho), v/(d c rho), r/d.
//   kPrinted:    beta = kappa / (c rho^2).
enum class MunkScaling { kConsistent, kPrinted };

// Constants of the normalized control model, expressed in scaled time s = d t.
// mu and xi are fixed by a1 + xi = mu rho and b1 = mu c rho.
struct ScaledParams {
  double a1 = 0.0;
  double b1 = 0.0;
  double c = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double mu = 0.0;
  double xi = 0.0;
};

// Pose in the earth frame and body velocities. psi is unwrapped. Depending on
// context the velocities are physical (m/s, rad/s) or normalized.
struct VesselState {
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  double u = 0.0;
  double v = 0.0;
  double r = 0.0;

  bool operator==(const VesselState&) const = default;
};

// Time derivative of a VesselState, same field layout.
using VesselRate = VesselState;

using StateVector = Eigen::Matrix<double, 6, 1>;

StateVector to_vector(const VesselState& s);
VesselState from_vector(const StateVector& v);

// Normalized surge force and yaw moment.
struct ControlInput {
  double tau1 = 0.0;
  double tau2 = 0.0;
};

// Physical-model inputs: tau_u/m1 and tau_r/m3.
struct PhysicalInput {
  double tau1 = 0.0;
  double tau2 = 0.0;
};

PrimitiveConstants derive_primitive_constants(const PhysicalParams& p);

// Replaces kappa, keeping the other constants.
PrimitiveConstants with_kappa(PrimitiveConstants k, double kappa);

ScaledParams scale_params(const PrimitiveConstants& k, double rho,
                          MunkScaling munk = MunkScaling::kConsistent);

// The a1/4 velocity scaling used by the reference monohull setup.
double default_rho(const PrimitiveConstants& k);

Eigen::Matrix2d rotation(double angle);
Eigen::Matrix2d velocity_scaling(const ScaledParams& sp);   // D_rho = diag(rho, c rho)
Eigen::Matrix2d coupling_matrix(double c);                  // A_c
Eigen::Matrix2d normalized_coupling(const ScaledParams& sp);  // A1 = D_rho^-1 A_c D_rho

VesselRate physical_derivative(const VesselState& s, const PhysicalInput& tau,
                               const PrimitiveConstants& k);

VesselRate normalized_derivative(const VesselState& s, const ControlInput& tau,
                                 const ScaledParams& sp);

// Velocity scaling between physical time t and scaled time s = d t. Pose is
// unchanged; (u, v, r) map to (u/(d rho), v/(d c rho), r/d).
VesselState normalize_state(const VesselState& s, const ScaledParams& sp,
                            const PrimitiveConstants& k);
VesselState denormalize_state(const VesselState& s, const ScaledParams& sp,
                              const PrimitiveConstants& k);

ControlInput normalize_input(const PhysicalInput& tau, const ScaledParams& sp,
                             const PrimitiveConstants& k);
PhysicalInput denormalize_input(const ControlInput& tau, const ScaledParams& sp,
                                const PrimitiveConstants& k);

// Actuator ceilings in normalized units.
struct ActuatorLimits {
  double tau1_max = 0.0;
  double tau2_max = 0.0;

  bool operator==(const ActuatorLimits&) const = default;
};

// min(a1/2, b1): decay rate of (u^2 + v^2)/2 outside the input-driven ball.
double velocity_decay_rate(const ScaledParams& sp);

// Ultimate bound on ||(u, v)|| under |tau1| <= tau1_max in its usual closed
// form, tau1_max / (2 sqrt(a1 m)). It is sqrt(2) below the radius below.
double surge_sway_limsup_bound(const ScaledParams& sp, double tau1_max);

// Radius that the energy argument actually certifies: outside it
// (u^2 + v^2)/2 is non-increasing. tau1_max / sqrt(2 a1 m).
double surge_sway_invariant_radius(const ScaledParams& sp, double tau1_max);

// Ultimate bound on |r|: tau2_max + |beta| tau1_max^2 / (2 a1 m).
double yaw_rate_limsup_bound(const ScaledParams& sp, const ActuatorLimits& limits);

inline double scaled_time(double t, const PrimitiveConstants& k) { return k.d * t; }
inline double physical_time(double s, const PrimitiveConstants& k) { return s / k.d; }

}  // namespace vtrack
