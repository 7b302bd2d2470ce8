#pragma once

#include <array>
#include <span>
#include <vector>

#include "vtrack/model.hpp"

namespace vtrack {

// f = true - estimated, per velocity channel.
struct ObservationError {
  double f_u = 0.0;
  double f_v = 0.0;
  double f_r = 0.0;
};

struct VelocityEstimate {
  double u = 0.0;
  double v = 0.0;
  double r = 0.0;
  double s = 0.0;  // scaled time of the estimate
};

// Estimated time derivatives of the measured pose.
struct PoseRates {
  double x_dot = 0.0;
  double y_dot = 0.0;
  double psi_dot = 0.0;
};

// (u, v) = D_rho^-1 R(-psi) (x_dot, y_dot), r = psi_dot.
VelocityEstimate estimate_from_pose_derivatives(const PoseRates& rates, double psi,
                                                const ScaledParams& sp, double s = 0.0);

// Second-order high-gain observer per channel,
//   value' = rate + 2 L (y - value),   rate' = L^2 (y - value),
// i.e. a double pole at -L. The rate estimate follows dy/dt through
// (L / (p + L))^2, so ramps are tracked exactly in steady state and a
// sinusoid of frequency w loses a fraction (w/L)^2 of its amplitude.
class HighGainDifferentiator {
 public:
  struct Channel {
    double value = 0.0;
    double rate = 0.0;
  };

  // Throws ParameterDomainError unless gain > 0.
  explicit HighGainDifferentiator(double gain);

  double gain() const noexcept { return gain_; }
  Channel derivative(const Channel& c, double measurement) const;

  // Starts at the first measured finite difference.
  void reset(double y0, double y1, double step);

  // Advances one sample period with the measurement interpolated linearly
  // between y_prev and y_next. Returns the new rate estimate.
  double update(double y_prev, double y_next, double step);

  const Channel& state() const noexcept { return state_; }

 private:
  double gain_;
  Channel state_;
};

// Rate estimates for uniformly sampled `samples`; element i estimates the
// derivative at sample i. Requires at least two samples.
std::vector<double> differentiate_stream(std::span<const double> samples, double gain,
                                         double step);

// Same, with explicit sample times. Throws std::invalid_argument
// ("input-format") when the sampling is not uniform.
std::vector<double> differentiate_stream(std::span<const double> times,
                                         std::span<const double> samples, double gain);

// Observation errors f(s) = F0 exp(-lambda s) * shape/||shape||, which are
// integrable with integral F0 / lambda by construction.
class SyntheticErrorHarness {
 public:
  // Throws ParameterDomainError for lambda <= 0, F0 < 0 or a zero shape.
  SyntheticErrorHarness(double f0, double lambda, std::array<double, 3> shape = {1.0, 1.0, 1.0});

  ObservationError error_at(double s) const;
  VelocityEstimate estimate(const VesselState& truth, double s) const;

  double f0() const noexcept { return f0_; }
  double lambda() const noexcept { return lambda_; }
  const std::array<double, 3>& direction() const noexcept { return direction_; }

  // Closed-form integral of ||f|| over [0, inf).
  double error_integral() const noexcept { return f0_ / lambda_; }

 private:
  double f0_;
  double lambda_;
  std::array<double, 3> direction_;
};

VelocityEstimate synthetic_error_harness(const VesselState& truth, double s, double f0,
                                         double lambda,
                                         std::array<double, 3> shape = {1.0, 1.0, 1.0});

}  // namespace vtrack
