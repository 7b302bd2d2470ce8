#include "vtrack/control.hpp"

#include <cmath>
#include <sstream>

#include "vtrack/errors.hpp"

namespace vtrack {

namespace {

constexpr double kDefaultK1 = 10.0;
constexpr double kDefaultK2 = 10.0;
constexpr double kDefaultU2 = 0.1;
constexpr double kDefaultM = 0.1;

// The saturated control can sit exactly on a ceiling; summation order then
// decides the last bit.
constexpr double kBudgetRoundoff = 1e-12;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

ConstraintCheck inequality(std::string name, double lhs, double rhs,
                           Severity severity = Severity::kHard) {
  return {name, std::move(name), lhs, rhs, lhs > rhs, severity};
}

ConstraintCheck identity(std::string name, double lhs, double rhs) {
  return {name, std::move(name), lhs, rhs, nearly_equal(lhs, rhs), Severity::kHard};
}

std::string describe(const ConstraintCheck& c) {
  std::ostringstream os;
  os.precision(6);
  os << c.name << " (lhs=" << c.lhs << ", rhs=" << c.rhs << ")";
  return os.str();
}

}  // namespace

double saturation_potential(double x) {
  const double ax = std::abs(x);
  return ax <= 1.0 ? 0.5 * x * x : ax - 0.5;
}

ErrorState error_transform(const VesselState& vessel, const VesselState& ref) {
  const double c = std::cos(ref.psi);
  const double s = std::sin(ref.psi);
  const double dx = vessel.x - ref.x;
  const double dy = vessel.y - ref.y;
  return {c * dx + s * dy,          -s * dx + c * dy,         vessel.u - ref.u,
          vessel.v - ref.v,         vessel.psi - ref.psi,     vessel.r - ref.r};
}

ActuatorLimits adopted_limits(const ScaledParams& sp, double U1, double U2,
                              const CeilingBasis& basis) {
  ActuatorLimits lim;
  lim.tau1_max = basis.tau1_re_peak + U1 + sp.rho;
  const double radius = surge_sway_invariant_radius(sp, lim.tau1_max);
  const double rv = std::max(radius, basis.vessel_speed0) + basis.estimate_error;
  const double rr = std::max(radius, basis.reference_speed0);
  lim.tau2_max = basis.tau2_re_peak + U2 + std::abs(sp.beta) * 0.5 * (rv * rv + rr * rr);
  return lim;
}

std::vector<ConstraintCheck> gain_constraint_table(const ScaledParams& sp,
                                                   const ControllerGains& g) {
  const double b1_over_c = sp.b1 / sp.c;
  std::vector<ConstraintCheck> t;
  t.push_back(inequality("a1 > U1 + rho", sp.a1, g.U1 + g.rho));
  t.push_back(inequality("U1 > |a1 - b1/c| rho / min(a1, b1/c)", g.U1,
                         std::abs(sp.a1 - b1_over_c) * g.rho / std::min(sp.a1, b1_over_c),
                         Severity::kWarning));
  t.push_back(inequality("U2 > 0", g.U2, 0.0));
  t.push_back(inequality("M > 0", g.M, 0.0));
  t.push_back(inequality("k1 > k2 - 1", g.k1, g.k2 - 1.0));
  t.push_back(inequality("k2 - 1 > 0", g.k2 - 1.0, 0.0));
  t.push_back(identity("a1 + xi = mu rho", sp.a1 + g.xi, g.mu * g.rho));
  t.push_back(identity("b1 = mu c rho", sp.b1, g.mu * sp.c * g.rho));
  return t;
}

GainSynthesis evaluate_gains(const ScaledParams& sp, const GainOverrides& overrides,
                             const CeilingBasis& basis) {
  ControllerGains g;
  g.U1 = overrides.U1.value_or(sp.a1 / 2.0);
  g.U2 = overrides.U2.value_or(kDefaultU2);
  g.M = overrides.M.value_or(kDefaultM);
  g.k1 = overrides.k1.value_or(kDefaultK1);
  g.k2 = overrides.k2.value_or(kDefaultK2);
  g.rho = sp.rho;
  g.mu = sp.mu;
  g.xi = sp.xi;
  g.alpha = (g.k1 - g.k2 + 1.0) / (g.U2 * g.U2);
  g.m_rate = velocity_decay_rate(sp);

  GainSynthesis out;
  out.checks = gain_constraint_table(sp, g);
  for (const auto& c : out.checks) {
    if (c.passed) continue;
    (c.severity == Severity::kHard ? out.failures : out.warnings).push_back(describe(c));
  }

  const ActuatorLimits adopted = adopted_limits(sp, g.U1, g.U2, basis);
  g.limits.tau1_max = overrides.tau1_max.value_or(adopted.tau1_max);
  g.limits.tau2_max = overrides.tau2_max.value_or(adopted.tau2_max);
  const double radius = std::max(surge_sway_invariant_radius(sp, g.limits.tau1_max),
                                 basis.reference_speed0);
  g.C0 = 2.0 * radius;
  out.gains = g;
  return out;
}

GainSynthesis synthesize_gains(const ScaledParams& sp, const GainOverrides& overrides,
                               const CeilingBasis& basis) {
  GainSynthesis out = evaluate_gains(sp, overrides, basis);
  if (!out.failures.empty()) throw ConstraintViolation(out.failures);
  const ActuatorLimits& lim = out.gains.limits;
  if (!(lim.tau1_max > 0.0) || !std::isfinite(lim.tau1_max)) {
    throw ParameterDomainError("tau1_max must be finite and > 0");
  }
  if (!(lim.tau2_max > 0.0) || !std::isfinite(lim.tau2_max)) {
    throw ParameterDomainError("tau2_max must be finite and > 0");
  }
  return out;
}

C1Report check_c1(const ControllerGains& gains, const ScaledParams& sp) {
  C1Report rep;
  const double denom = sp.a1 * gains.m_rate;
  const double t1 = gains.limits.tau1_max;
  rep.lhs = sp.beta * t1 * t1 / denom;
  rep.lhs_magnitude = std::abs(rep.lhs);
  rep.rhs = gains.limits.tau2_max;
  rep.satisfied = rep.lhs < rep.rhs;
  // Physical ceilings are tau1_max rho d^2 and tau2_max d^2; d cancels.
  rep.rho_floor = t1 * sp.rho * std::sqrt(std::abs(sp.beta) / (denom * gains.limits.tau2_max));
  return rep;
}

FeedbackOutput state_feedback(const ErrorState& e, const ControllerGains& g) {
  FeedbackOutput w;
  w.w1 = -g.U1 * saturate(g.xi * e.e_u / g.U1) - g.rho * saturate(g.M * (e.e_x + e.e_u / g.mu));
  w.w2 = -g.U2 * saturate((g.k1 * e.e_psi + (g.k2 - 1.0) * e.e_r) / g.U2);
  return w;
}

FeedbackOutput output_feedback(const ErrorState& pose_error, const EstimatedVelocityErrors& est,
                               const ControllerGains& g) {
  ErrorState mixed = pose_error;
  mixed.e_u = est.e_u;
  mixed.e_v = est.e_v;
  mixed.e_r = est.e_r;
  return state_feedback(mixed, g);
}

ControlInput assemble_inputs(const FeedbackOutput& w, double u, double v, const VesselState& ref,
                             const ControlInput& ref_input, const ScaledParams& sp,
                             const ActuatorLimits& limits) {
  ControlInput tau;
  tau.tau1 = ref_input.tau1 + w.w1;
  tau.tau2 = ref_input.tau2 + w.w2 - sp.beta * (u * v - ref.u * ref.v);
  auto check = [](const char* name, double value, double limit) {
    if (!(std::abs(value) <= limit * (1.0 + kBudgetRoundoff))) {
      std::ostringstream os;
      os.precision(17);
      os << '|' << name << "| = " << std::abs(value) << " exceeds " << name << "_max = " << limit;
      throw SaturationBudgetError(os.str());
    }
  };
  check("tau1", tau.tau1, limits.tau1_max);
  check("tau2", tau.tau2, limits.tau2_max);
  return tau;
}

}  // namespace vtrack
