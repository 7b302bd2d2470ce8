#include "vtrack/observer.hpp"

#include <cmath>
#include <stdexcept>

#include "vtrack/errors.hpp"

namespace vtrack {

VelocityEstimate estimate_from_pose_derivatives(const PoseRates& rates, double psi,
                                                const ScaledParams& sp, double s) {
  const double c = std::cos(psi);
  const double sn = std::sin(psi);
  // R(-psi) (x_dot, y_dot), then undo D_rho.
  const double body_x = c * rates.x_dot + sn * rates.y_dot;
  const double body_y = -sn * rates.x_dot + c * rates.y_dot;
  return {body_x / sp.rho, body_y / (sp.c * sp.rho), rates.psi_dot, s};
}

HighGainDifferentiator::HighGainDifferentiator(double gain) : gain_(gain) {
  if (!(gain > 0.0) || !std::isfinite(gain)) {
    throw ParameterDomainError("differentiator gain must be finite and > 0");
  }
}

HighGainDifferentiator::Channel HighGainDifferentiator::derivative(const Channel& c,
                                                                   double measurement) const {
  const double innovation = measurement - c.value;
  return {c.rate + 2.0 * gain_ * innovation, gain_ * gain_ * innovation};
}

void HighGainDifferentiator::reset(double y0, double y1, double step) {
  state_ = {y0, (y1 - y0) / step};
}

double HighGainDifferentiator::update(double y_prev, double y_next, double step) {
  auto y = [&](double frac) { return y_prev + frac * (y_next - y_prev); };
  auto add = [](const Channel& a, const Channel& k, double h) {
    return Channel{a.value + h * k.value, a.rate + h * k.rate};
  };
  const Channel k1 = derivative(state_, y(0.0));
  const Channel k2 = derivative(add(state_, k1, 0.5 * step), y(0.5));
  const Channel k3 = derivative(add(state_, k2, 0.5 * step), y(0.5));
  const Channel k4 = derivative(add(state_, k3, step), y(1.0));
  state_.value += step / 6.0 * (k1.value + 2.0 * k2.value + 2.0 * k3.value + k4.value);
  state_.rate += step / 6.0 * (k1.rate + 2.0 * k2.rate + 2.0 * k3.rate + k4.rate);
  return state_.rate;
}

std::vector<double> differentiate_stream(std::span<const double> samples, double gain,
                                         double step) {
  if (!(step > 0.0)) throw std::invalid_argument("input-format: step must be > 0");
  if (samples.size() < 2) throw std::invalid_argument("input-format: need at least two samples");
  HighGainDifferentiator diff(gain);
  diff.reset(samples[0], samples[1], step);
  std::vector<double> rates;
  rates.reserve(samples.size());
  rates.push_back(diff.state().rate);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    rates.push_back(diff.update(samples[i - 1], samples[i], step));
  }
  return rates;
}

std::vector<double> differentiate_stream(std::span<const double> times,
                                         std::span<const double> samples, double gain) {
  if (times.size() != samples.size()) {
    throw std::invalid_argument("input-format: times and samples differ in length");
  }
  if (times.size() < 2) throw std::invalid_argument("input-format: need at least two samples");
  const double step = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double h = times[i] - times[i - 1];
    if (!(h > 0.0) || std::abs(h - step) > 1e-9 * std::max(1.0, std::abs(times[i]))) {
      throw std::invalid_argument("input-format: non-uniform sampling at index " +
                                  std::to_string(i));
    }
  }
  return differentiate_stream(samples, gain, step);
}

SyntheticErrorHarness::SyntheticErrorHarness(double f0, double lambda, std::array<double, 3> shape)
    : f0_(f0), lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterDomainError("harness lambda must be finite and > 0");
  }
  if (!(f0 >= 0.0) || !std::isfinite(f0)) {
    throw ParameterDomainError("harness F0 must be finite and >= 0");
  }
  const double n = std::sqrt(shape[0] * shape[0] + shape[1] * shape[1] + shape[2] * shape[2]);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ParameterDomainError("harness shape must be a finite non-zero vector");
  }
  direction_ = {shape[0] / n, shape[1] / n, shape[2] / n};
}

ObservationError SyntheticErrorHarness::error_at(double s) const {
  const double mag = f0_ * std::exp(-lambda_ * s);
  return {mag * direction_[0], mag * direction_[1], mag * direction_[2]};
}

VelocityEstimate SyntheticErrorHarness::estimate(const VesselState& truth, double s) const {
  const ObservationError f = error_at(s);
  return {truth.u - f.f_u, truth.v - f.f_v, truth.r - f.f_r, s};
}

VelocityEstimate synthetic_error_harness(const VesselState& truth, double s, double f0,
                                         double lambda, std::array<double, 3> shape) {
  return SyntheticErrorHarness(f0, lambda, shape).estimate(truth, s);
}

}  // namespace vtrack
