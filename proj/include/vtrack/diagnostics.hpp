#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "vtrack/sim.hpp"

namespace vtrack {

// Pointwise checks of the stability argument along a recorded run. Each
// returns how many samples were tested and how many satisfied the inequality.
struct CheckTally {
  std::size_t tested = 0;
  std::size_t satisfied = 0;
  double worst_excess = 0.0;  // max of (lhs - rhs) over the tested samples

  double fraction() const { return tested == 0 ? 1.0 : double(satisfied) / double(tested); }
  bool all() const { return satisfied == tested; }
};

// Centered difference of V against -alpha e_r^2 - (k2 - 1) sigma(z)^2 + slack
// at interior samples. Needs consecutive samples one step apart.
CheckTally lyapunov_decrease(const RunRecord& rec, double slack);

// d/ds (u^2 + v^2)/2 <= -m_rate (u^2 + v^2) + tau1^2 / (2 a1), analytic derivative.
CheckTally velocity_energy_inequality(const RunRecord& rec, double tolerance = 1e-9);

// dG/ds + 2 m2 G <= rho^2 sigma(M W1)^2 / a_tilde + |e_r| (|v_re||e_u| + |u_re||e_v|)
// with a_tilde = min(a1, b1/c) and m2 = min(a_tilde/2, b1), tested from `from_s` on.
CheckTally velocity_error_inequality(const RunRecord& rec, double from_s, double tolerance = 1e-9);

// rho / sqrt(m2 a_tilde): ultimate bound of ||(e_u, e_v)||.
double velocity_error_bound(const ScaledParams& sp, const ControllerGains& g);

// Trapezoidal integral of W1 sigma(M W1) over the record.
double w1_dissipation_integral(const RunRecord& rec);

// ||W_tilde(end) - W_tilde(mid)||, mid being the sample nearest s_end / 2.
double rotated_w_gap(const RunRecord& rec);

struct DecayFit {
  double slope = 0.0;  // least-squares slope of log ||(e_psi, e_r)|| per unit s
  double from_s = 0.0;
  double to_s = 0.0;
  std::size_t points = 0;
};

// Fits log ||(e_psi, e_r)|| from `from_s` until the norm first drops below `floor`.
std::optional<DecayFit> heading_decay_fit(const RunRecord& rec, double from_s,
                                          double floor = 1e-10);

// Slow eigenvalue of [[0, 1], [-k1, -k2]] (the root of p^2 + k2 p + k1 nearest 0).
double slow_heading_eigenvalue(double k1, double k2);

// Splits the record after `from_s` into windows of length `window` and checks
// that the per-window maximum of |series| never grows by more than `rel_slack`
// (relative) plus `abs_slack`.
template <class Series>
bool window_envelope_nonincreasing(const RunRecord& rec, double from_s, double window,
                                   Series&& series, double rel_slack = 1e-3,
                                   double abs_slack = 1e-12);

}  // namespace vtrack

#include <cmath>

namespace vtrack {

template <class Series>
bool window_envelope_nonincreasing(const RunRecord& rec, double from_s, double window,
                                   Series&& series, double rel_slack, double abs_slack) {
  std::optional<double> previous;
  double current = 0.0;
  double window_end = from_s + window;
  bool any = false;
  for (const Sample& smp : rec.samples) {
    if (smp.s < from_s) continue;
    if (smp.s >= window_end) {
      if (any) {
        if (previous && current > *previous * (1.0 + rel_slack) + abs_slack) return false;
        previous = current;
      }
      current = 0.0;
      any = false;
      while (smp.s >= window_end) window_end += window;
    }
    current = std::max(current, std::abs(series(smp)));
    any = true;
  }
  if (any && previous && current > *previous * (1.0 + rel_slack) + abs_slack) return false;
  return true;
}

}  // namespace vtrack
