#include "vtrack/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vtrack/errors.hpp"

namespace vtrack {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ParameterDomainError(std::string(name) + " must be finite and > 0, got " +
                               std::to_string(value));
  }
}

}  // namespace

StateVector to_vector(const VesselState& s) {
  StateVector v;
  v << s.x, s.y, s.psi, s.u, s.v, s.r;
  return v;
}

VesselState from_vector(const StateVector& v) { return {v(0), v(1), v(2), v(3), v(4), v(5)}; }

PrimitiveConstants derive_primitive_constants(const PhysicalParams& p) {
  require_positive(p.m1, "m1");
  require_positive(p.m2, "m2");
  require_positive(p.m3, "m3");
  require_positive(p.d1, "d1");
  require_positive(p.d2, "d2");
  require_positive(p.d3, "d3");
  return {p.d1 / p.m1, p.d2 / p.m2, p.m1 / p.m2, p.d3 / p.m3, (p.m1 - p.m2) / p.m3};
}

PrimitiveConstants with_kappa(PrimitiveConstants k, double kappa) {
  if (!std::isfinite(kappa)) throw ParameterDomainError("kappa must be finite");
  k.kappa = kappa;
  return k;
}

ScaledParams scale_params(const PrimitiveConstants& k, double rho, MunkScaling munk) {
  require_positive(rho, "rho");
  require_positive(k.a, "a");
  require_positive(k.b, "b");
  require_positive(k.c, "c");
  require_positive(k.d, "d");

  ScaledParams sp;
  sp.a1 = k.a / k.d;
  sp.b1 = k.b / k.d;
  sp.c = k.c;
  sp.rho = rho;
  sp.beta = munk == MunkScaling::kConsistent ? k.kappa * k.c * rho * rho
                                             : k.kappa / (k.c * rho * rho);
  sp.mu = sp.b1 / (k.c * rho);
  sp.xi = sp.b1 / k.c - sp.a1;
  return sp;
}

double default_rho(const PrimitiveConstants& k) { return (k.a / k.d) / 4.0; }

Eigen::Matrix2d rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

Eigen::Matrix2d velocity_scaling(const ScaledParams& sp) {
  return Eigen::Vector2d(sp.rho, sp.c * sp.rho).asDiagonal();
}

Eigen::Matrix2d coupling_matrix(double c) {
  Eigen::Matrix2d ac;
  ac << 0.0, -1.0 / c, c, 0.0;
  return ac;
}

Eigen::Matrix2d normalized_coupling(const ScaledParams& sp) {
  const Eigen::Matrix2d d_rho = velocity_scaling(sp);
  return d_rho.inverse() * coupling_matrix(sp.c) * d_rho;
}

VesselRate physical_derivative(const VesselState& s, const PhysicalInput& tau,
                               const PrimitiveConstants& k) {
  const double cp = std::cos(s.psi);
  const double sn = std::sin(s.psi);
  VesselRate rate;
  rate.x = s.u * cp - s.v * sn;
  rate.y = s.u * sn + s.v * cp;
  rate.u = s.v * s.r / k.c - k.a * s.u + tau.tau1;
  rate.v = -k.c * s.u * s.r - k.b * s.v;
  rate.psi = s.r;
  rate.r = k.kappa * s.u * s.v - k.d * s.r + tau.tau2;
  return rate;
}

// Written out component-wise: A1 = [[0,-1],[1,0]], so -r A1 (u,v) = (r v, -r u).
VesselRate normalized_derivative(const VesselState& s, const ControlInput& tau,
                                 const ScaledParams& sp) {
  const double cp = std::cos(s.psi);
  const double sn = std::sin(s.psi);
  const double ux = sp.rho * s.u;
  const double vy = sp.c * sp.rho * s.v;
  VesselRate rate;
  rate.x = ux * cp - vy * sn;
  rate.y = ux * sn + vy * cp;
  rate.u = -sp.a1 * s.u + s.r * s.v + tau.tau1;
  rate.v = -sp.b1 * s.v - s.r * s.u;
  rate.psi = s.r;
  rate.r = sp.beta * s.u * s.v - s.r + tau.tau2;
  return rate;
}

VesselState normalize_state(const VesselState& s, const ScaledParams& sp,
                            const PrimitiveConstants& k) {
  return {s.x, s.y, s.psi, s.u / (k.d * sp.rho), s.v / (k.d * sp.c * sp.rho), s.r / k.d};
}

VesselState denormalize_state(const VesselState& s, const ScaledParams& sp,
                              const PrimitiveConstants& k) {
  return {s.x, s.y, s.psi, s.u * k.d * sp.rho, s.v * k.d * sp.c * sp.rho, s.r * k.d};
}

ControlInput normalize_input(const PhysicalInput& tau, const ScaledParams& sp,
                             const PrimitiveConstants& k) {
  return {tau.tau1 / (sp.rho * k.d * k.d), tau.tau2 / (k.d * k.d)};
}

PhysicalInput denormalize_input(const ControlInput& tau, const ScaledParams& sp,
                                const PrimitiveConstants& k) {
  return {tau.tau1 * sp.rho * k.d * k.d, tau.tau2 * k.d * k.d};
}

double velocity_decay_rate(const ScaledParams& sp) { return std::min(sp.a1 / 2.0, sp.b1); }

double surge_sway_limsup_bound(const ScaledParams& sp, double tau1_max) {
  return tau1_max / (2.0 * std::sqrt(sp.a1 * velocity_decay_rate(sp)));
}

double surge_sway_invariant_radius(const ScaledParams& sp, double tau1_max) {
  return tau1_max / std::sqrt(2.0 * sp.a1 * velocity_decay_rate(sp));
}

double yaw_rate_limsup_bound(const ScaledParams& sp, const ActuatorLimits& limits) {
  return limits.tau2_max + std::abs(sp.beta) * limits.tau1_max * limits.tau1_max /
                               (2.0 * sp.a1 * velocity_decay_rate(sp));
}

}  // namespace vtrack
