#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "vtrack/model.hpp"

namespace vtrack {

// sigma(t) = t / max(1, |t|).
inline double saturate(double x) { return x / std::max(1.0, x < 0.0 ? -x : x); }

// Antiderivative of saturate with value 0 at 0: x^2/2 inside [-1, 1], |x| - 1/2 outside.
double saturation_potential(double x);

// Tracking errors with the position error expressed in the reference heading frame.
struct ErrorState {
  double e_x = 0.0;
  double e_y = 0.0;
  double e_u = 0.0;
  double e_v = 0.0;
  double e_psi = 0.0;
  double e_r = 0.0;
};

ErrorState error_transform(const VesselState& vessel, const VesselState& ref);

struct ControllerGains {
  double U1 = 0.0;
  double U2 = 0.0;
  double rho = 0.0;
  double xi = 0.0;
  double mu = 0.0;
  double M = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double alpha = 0.0;  // (k1 - k2 + 1) / U2^2
  ActuatorLimits limits;
  double m_rate = 0.0;  // min(a1/2, b1)
  double C0 = 0.0;      // u_max + v_max, diagnostics only
};

// Explicit gain choices; anything left empty takes the default
// k1 = k2 = 10, U2 = 0.1, U1 = a1/2, M = 0.1 and the adopted ceilings.
struct GainOverrides {
  std::optional<double> U1;
  std::optional<double> U2;
  std::optional<double> M;
  std::optional<double> k1;
  std::optional<double> k2;
  std::optional<double> tau1_max;
  std::optional<double> tau2_max;

  bool operator==(const GainOverrides&) const = default;
};

// Data the default ceilings are built from: peak reference inputs and the
// initial ||(u, v)|| of vessel and reference (normalized). In output-feedback
// runs `estimate_error` bounds ||(f_u, f_v)|| so the budget covers u_hat v_hat.
struct CeilingBasis {
  double tau1_re_peak = 0.0;
  double tau2_re_peak = 0.0;
  double vessel_speed0 = 0.0;
  double reference_speed0 = 0.0;
  double estimate_error = 0.0;
};

// tau1_max = |tau1_re| + U1 + rho.
// tau2_max = |tau2_re| + U2 + |beta| (R_v^2 + R_re^2) / 2 with
// R = max(initial speed, certified velocity radius for tau1_max); this covers
// |beta (u v - u_re v_re)| along the whole run, transient included.
ActuatorLimits adopted_limits(const ScaledParams& sp, double U1, double U2,
                              const CeilingBasis& basis);

enum class Severity { kHard, kWarning };

struct ConstraintCheck {
  std::string name;
  std::string expression;
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = false;
  Severity severity = Severity::kHard;
};

// Every gain inequality, evaluated once each.
std::vector<ConstraintCheck> gain_constraint_table(const ScaledParams& sp,
                                                   const ControllerGains& g);

struct GainSynthesis {
  ControllerGains gains;
  std::vector<ConstraintCheck> checks;
  std::vector<std::string> failures;  // hard inequalities that did not hold
  std::vector<std::string> warnings;
};

// Same derivation as synthesize_gains but never throws: failed inequalities
// are only listed, and the ceilings are left unchecked. For reporting.
GainSynthesis evaluate_gains(const ScaledParams& sp, const GainOverrides& overrides,
                             const CeilingBasis& basis);

// Fills defaults and the identity-fixed constants (mu, xi, alpha), then
// validates the table. Only the U1 lower bound is downgraded to a warning.
// Throws ConstraintViolation listing every failed hard inequality, and
// ParameterDomainError for non-finite or non-positive ceilings.
GainSynthesis synthesize_gains(const ScaledParams& sp, const GainOverrides& overrides,
                               const CeilingBasis& basis);

struct C1Report {
  double lhs = 0.0;            // beta tau1_max^2 / (a1 m_rate), signed beta
  double lhs_magnitude = 0.0;  // same with |beta|
  double rhs = 0.0;            // tau2_max
  bool satisfied = false;      // lhs < rhs
  double rho_floor = 0.0;      // (tau1_max_phys/d) sqrt(|beta| / (a1 m_rate tau2_max_phys))
};

C1Report check_c1(const ControllerGains& gains, const ScaledParams& sp);

struct FeedbackOutput {
  double w1 = 0.0;
  double w2 = 0.0;
};

FeedbackOutput state_feedback(const ErrorState& e, const ControllerGains& g);

// Velocity errors computed from observed velocities: u_hat - u_re, etc.
struct EstimatedVelocityErrors {
  double e_u = 0.0;
  double e_v = 0.0;
  double e_r = 0.0;
};

// Same law as state_feedback with (e_u, e_r) replaced by their estimates.
// Only e_x and e_psi of `pose_error` are read.
FeedbackOutput output_feedback(const ErrorState& pose_error, const EstimatedVelocityErrors& est,
                               const ControllerGains& g);

// tau1 = tau1_re + w1, tau2 = tau2_re + w2 - beta (u v - u_re v_re). Pass the
// observed (u, v) in output-feedback mode. Throws SaturationBudgetError if a
// component exceeds its ceiling.
ControlInput assemble_inputs(const FeedbackOutput& w, double u, double v, const VesselState& ref,
                             const ControlInput& ref_input, const ScaledParams& sp,
                             const ActuatorLimits& limits);

}  // namespace vtrack
