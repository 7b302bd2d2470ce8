#include "vtrack/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace vtrack {

namespace {

void tally(CheckTally& t, double lhs, double rhs) {
  ++t.tested;
  if (lhs <= rhs) ++t.satisfied;
  t.worst_excess = t.tested == 1 ? lhs - rhs : std::max(t.worst_excess, lhs - rhs);
}

}  // namespace

CheckTally lyapunov_decrease(const RunRecord& rec, double slack) {
  const ControllerGains& g = rec.setup.synthesis.gains;
  const auto& smp = rec.samples;
  CheckTally t;
  for (std::size_t i = 1; i + 1 < smp.size(); ++i) {
    const double v_dot = (smp[i + 1].V - smp[i - 1].V) / (smp[i + 1].s - smp[i - 1].s);
    const double sz = saturate(smp[i].z);
    const double bound = -g.alpha * smp[i].error.e_r * smp[i].error.e_r - (g.k2 - 1.0) * sz * sz;
    tally(t, v_dot, bound + slack);
  }
  return t;
}

CheckTally velocity_energy_inequality(const RunRecord& rec, double tolerance) {
  const ScaledParams& sp = rec.setup.params;
  const double m = velocity_decay_rate(sp);
  CheckTally t;
  for (const Sample& smp : rec.samples) {
    const VesselRate d = normalized_derivative(smp.vessel, smp.tau, sp);
    const double lhs = smp.vessel.u * d.u + smp.vessel.v * d.v;
    const double rhs = -m * 2.0 * smp.Vuv + smp.tau.tau1 * smp.tau.tau1 / (2.0 * sp.a1);
    tally(t, lhs, rhs + tolerance * (1.0 + std::abs(rhs) + std::abs(lhs)));
  }
  return t;
}

CheckTally velocity_error_inequality(const RunRecord& rec, double from_s, double tolerance) {
  const ScaledParams& sp = rec.setup.params;
  const ControllerGains& g = rec.setup.synthesis.gains;
  const double a_tilde = std::min(sp.a1, sp.b1 / sp.c);
  const double m2 = std::min(a_tilde / 2.0, sp.b1);
  CheckTally t;
  for (const Sample& smp : rec.samples) {
    if (smp.s < from_s) continue;
    const VesselRate dv = normalized_derivative(smp.vessel, smp.tau, sp);
    const VesselRate dr =
        normalized_derivative(smp.ref, rec.scenario.reference_input.at(smp.s), sp);
    const ErrorState& e = smp.error;
    const double g_dot = e.e_u * (dv.u - dr.u) + e.e_v * (dv.v - dr.v);
    const double sigma1 = saturate(g.M * smp.W1);
    const double coupling =
        std::abs(e.e_r) * (std::abs(smp.ref.v) * std::abs(e.e_u) + std::abs(smp.ref.u) * std::abs(e.e_v));
    const double lhs = g_dot + 2.0 * m2 * smp.G;
    const double rhs = g.rho * g.rho * sigma1 * sigma1 / a_tilde + coupling;
    tally(t, lhs, rhs + tolerance * (1.0 + std::abs(rhs) + 2.0 * m2 * smp.G));
  }
  return t;
}

double velocity_error_bound(const ScaledParams& sp, const ControllerGains& g) {
  const double a_tilde = std::min(sp.a1, sp.b1 / sp.c);
  const double m2 = std::min(a_tilde / 2.0, sp.b1);
  return g.rho / std::sqrt(m2 * a_tilde);
}

double w1_dissipation_integral(const RunRecord& rec) {
  const double M = rec.setup.synthesis.gains.M;
  double total = 0.0;
  for (std::size_t i = 1; i < rec.samples.size(); ++i) {
    const Sample& a = rec.samples[i - 1];
    const Sample& b = rec.samples[i];
    total += 0.5 * (b.s - a.s) * (a.W1 * saturate(M * a.W1) + b.W1 * saturate(M * b.W1));
  }
  return total;
}

double rotated_w_gap(const RunRecord& rec) {
  if (rec.samples.empty()) return 0.0;
  const Sample& last = rec.samples.back();
  const double mid_s = 0.5 * last.s;
  const auto mid = std::min_element(rec.samples.begin(), rec.samples.end(),
                                    [mid_s](const Sample& a, const Sample& b) {
                                      return std::abs(a.s - mid_s) < std::abs(b.s - mid_s);
                                    });
  return std::hypot(last.Wt1 - mid->Wt1, last.Wt2 - mid->Wt2);
}

std::optional<DecayFit> heading_decay_fit(const RunRecord& rec, double from_s, double floor) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  DecayFit fit;
  for (const Sample& smp : rec.samples) {
    if (smp.s < from_s) continue;
    const double n = std::hypot(smp.error.e_psi, smp.error.e_r);
    if (n < floor) break;
    const double y = std::log(n);
    if (fit.points == 0) fit.from_s = smp.s;
    fit.to_s = smp.s;
    ++fit.points;
    sx += smp.s;
    sy += y;
    sxx += smp.s * smp.s;
    sxy += smp.s * y;
  }
  if (fit.points < 3) return std::nullopt;
  const double n = static_cast<double>(fit.points);
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) return std::nullopt;
  fit.slope = (n * sxy - sx * sy) / denom;
  return fit;
}

double slow_heading_eigenvalue(double k1, double k2) {
  const double disc = k2 * k2 - 4.0 * k1;
  if (disc < 0.0) return -k2 / 2.0;
  return (-k2 + std::sqrt(disc)) / 2.0;
}

}  // namespace vtrack
