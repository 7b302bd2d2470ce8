#include "vtrack/sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vtrack/errors.hpp"
#include "vtrack/integrator.hpp"

namespace vtrack {

namespace {

// vessel (6) | reference (6) | differentiator channels x, y, psi as (value, rate)
using SimVector = Eigen::Matrix<double, 18, 1>;

PhysicalParams monohull_params() { return {120e3, 172.9e3, 636e5, 215e2, 97e3, 802e4}; }

VesselState to_normalized(const InitialState& init, const ScaledParams& sp,
                          const PrimitiveConstants& k) {
  return init.units == StateUnits::kPhysical ? normalize_state(init.state, sp, k) : init.state;
}

struct StageControl {
  ErrorState error;
  FeedbackOutput w;
  ControlInput tau;
  ControlInput ref_input;
  ObservationError f;
};

class ClosedLoop {
 public:
  ClosedLoop(const Scenario& sc, const ScenarioSetup& setup)
      : sc_(sc), sp_(setup.params), gains_(setup.synthesis.gains) {
    if (sc.feedback.mode == FeedbackMode::kOutputHarness) {
      harness_.emplace(sc.feedback.f0, sc.feedback.lambda, sc.feedback.shape);
    }
    if (sc.feedback.mode == FeedbackMode::kOutputDifferentiator) {
      differentiator_.emplace(sc.feedback.differentiator_gain);
    }
  }

  SimVector initial(const ScenarioSetup& setup) const {
    SimVector x = SimVector::Zero();
    x.segment<6>(0) = to_vector(setup.vessel0);
    x.segment<6>(6) = to_vector(setup.reference0);
    // Pose channels start at the measured pose with no rate information.
    x(12) = setup.vessel0.x;
    x(14) = setup.vessel0.y;
    x(16) = setup.vessel0.psi;
    return x;
  }

  StageControl control(double s, const SimVector& x) const {
    const VesselState vessel = from_vector(x.segment<6>(0));
    const VesselState ref = from_vector(x.segment<6>(6));
    StageControl out;
    out.ref_input = sc_.reference_input.at(s);
    out.error = error_transform(vessel, ref);

    double u_used = vessel.u;
    double v_used = vessel.v;
    switch (sc_.feedback.mode) {
      case FeedbackMode::kState:
        out.w = state_feedback(out.error, gains_);
        break;
      case FeedbackMode::kOutputHarness:
      case FeedbackMode::kOutputDifferentiator: {
        const VelocityEstimate est =
            harness_ ? harness_->estimate(vessel, s)
                     : estimate_from_pose_derivatives({x(13), x(15), x(17)}, vessel.psi, sp_, s);
        out.f = {vessel.u - est.u, vessel.v - est.v, vessel.r - est.r};
        out.w = output_feedback(out.error, {est.u - ref.u, est.v - ref.v, est.r - ref.r}, gains_);
        u_used = est.u;
        v_used = est.v;
        break;
      }
    }
    out.tau = assemble_inputs(out.w, u_used, v_used, ref, out.ref_input, sp_, gains_.limits);
    return out;
  }

  SimVector derivative(double s, const SimVector& x) const {
    const StageControl c = control(s, x);
    SimVector dx = SimVector::Zero();
    dx.segment<6>(0) = to_vector(normalized_derivative(from_vector(x.segment<6>(0)), c.tau, sp_));
    dx.segment<6>(6) =
        to_vector(normalized_derivative(from_vector(x.segment<6>(6)), c.ref_input, sp_));
    if (differentiator_) {
      for (int ch = 0; ch < 3; ++ch) {
        const auto d = differentiator_->derivative({x(12 + 2 * ch), x(13 + 2 * ch)}, x(ch));
        dx(12 + 2 * ch) = d.value;
        dx(13 + 2 * ch) = d.rate;
      }
    }
    return dx;
  }

  Sample sample(double s, const SimVector& x, const StageControl& c) const {
    Sample out;
    out.s = s;
    out.vessel = from_vector(x.segment<6>(0));
    out.ref = from_vector(x.segment<6>(6));
    out.error = c.error;
    out.tau = c.tau;
    out.w = c.w;
    out.f = c.f;
    const ErrorState& e = c.error;
    out.z = z_of(e);
    out.V = 0.5 * gains_.alpha * e.e_r * e.e_r + saturation_potential(out.z);
    out.Vuv = 0.5 * (out.vessel.u * out.vessel.u + out.vessel.v * out.vessel.v);
    out.G = 0.5 * (e.e_u * e.e_u + e.e_v * e.e_v);
    out.W1 = e.e_x + e.e_u / gains_.mu;
    out.W2 = e.e_y + e.e_v / gains_.mu;
    const double cp = std::cos(out.ref.psi);
    const double sn = std::sin(out.ref.psi);
    out.Wt1 = cp * out.W1 - sn * out.W2;
    out.Wt2 = sn * out.W1 + cp * out.W2;
    return out;
  }

  double z_of(const ErrorState& e) const {
    return (gains_.k1 * e.e_psi + (gains_.k2 - 1.0) * e.e_r) / gains_.U2;
  }

  const std::optional<SyntheticErrorHarness>& harness() const { return harness_; }

 private:
  const Scenario& sc_;
  ScaledParams sp_;
  ControllerGains gains_;
  std::optional<SyntheticErrorHarness> harness_;
  std::optional<HighGainDifferentiator> differentiator_;
};

double observation_norm(const ObservationError& f) {
  return std::sqrt(f.f_u * f.f_u + f.f_v * f.f_v + f.f_r * f.f_r);
}

}  // namespace

std::string to_string(FeedbackMode mode) {
  switch (mode) {
    case FeedbackMode::kState:
      return "state";
    case FeedbackMode::kOutputDifferentiator:
      return "output-diff";
    case FeedbackMode::kOutputHarness:
      return "output-harness";
  }
  return "state";
}

FeedbackMode parse_feedback_mode(const std::string& text) {
  if (text == "state") return FeedbackMode::kState;
  if (text == "output-diff") return FeedbackMode::kOutputDifferentiator;
  if (text == "output-harness") return FeedbackMode::kOutputHarness;
  throw std::invalid_argument("unknown feedback mode '" + text +
                              "' (expected state, output-diff or output-harness)");
}

Scenario paper_monohull_scenario() {
  Scenario sc;
  sc.name = "paper-monohull";
  sc.vessel_params = monohull_params();
  sc.reference_input = ReferenceInput::constant(10.0, 0.05);
  sc.reference_initial = {{0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, StateUnits::kPhysical};
  sc.vessel_initial = {{50.0, -150.0, std::numbers::pi / 4.0, 50.0, 0.0, 0.0},
                       StateUnits::kPhysical};
  sc.horizon = 600.0;
  sc.step = 1e-3;
  return sc;
}

Scenario moderate_monohull_scenario() {
  Scenario sc = paper_monohull_scenario();
  sc.name = "moderate-monohull";
  sc.vessel_initial = {{20.0, -20.0, std::numbers::pi / 8.0, 0.0, 0.0, 0.0},
                       StateUnits::kPhysical};
  return sc;
}

Scenario bundled_scenario(const std::string& name) {
  if (name == "paper-monohull") return paper_monohull_scenario();
  if (name == "moderate-monohull") return moderate_monohull_scenario();
  throw std::invalid_argument("unknown bundled scenario '" + name + "'");
}

std::vector<std::string> bundled_scenario_names() {
  return {"paper-monohull", "moderate-monohull"};
}

CeilingBasis ceiling_basis(const Scenario& sc, const ScenarioSetup& setup) {
  CeilingBasis basis;
  basis.tau1_re_peak = sc.reference_input.peak_tau1();
  basis.tau2_re_peak = sc.reference_input.peak_tau2();
  basis.vessel_speed0 = std::hypot(setup.vessel0.u, setup.vessel0.v);
  basis.reference_speed0 = std::hypot(setup.reference0.u, setup.reference0.v);
  if (sc.feedback.mode == FeedbackMode::kOutputHarness) basis.estimate_error = sc.feedback.f0;
  return basis;
}

ScenarioSetup derive_setup(const Scenario& sc) {
  ScenarioSetup setup;
  setup.derived_constants = derive_primitive_constants(sc.vessel_params);
  setup.constants = sc.kappa_override ? with_kappa(setup.derived_constants, *sc.kappa_override)
                                      : setup.derived_constants;
  const double rho = sc.rho.value_or(default_rho(setup.constants));
  setup.params = scale_params(setup.constants, rho, sc.munk);
  setup.vessel0 = to_normalized(sc.vessel_initial, setup.params, setup.constants);
  setup.reference0 = to_normalized(sc.reference_initial, setup.params, setup.constants);
  setup.synthesis = evaluate_gains(setup.params, sc.gains, ceiling_basis(sc, setup));
  setup.c1 = check_c1(setup.synthesis.gains, setup.params);
  return setup;
}

ScenarioSetup prepare(const Scenario& sc) {
  if (!(sc.step > 0.0) || !std::isfinite(sc.step)) {
    throw ParameterDomainError("step must be finite and > 0");
  }
  if (!(sc.horizon >= sc.step) || !std::isfinite(sc.horizon)) {
    throw ParameterDomainError("horizon must be finite and >= step");
  }
  if (sc.record_every < 1) throw ParameterDomainError("record_every must be >= 1");
  if (sc.feedback.mode == FeedbackMode::kOutputHarness) {
    SyntheticErrorHarness check(sc.feedback.f0, sc.feedback.lambda, sc.feedback.shape);
  }
  if (sc.feedback.mode == FeedbackMode::kOutputDifferentiator) {
    HighGainDifferentiator check(sc.feedback.differentiator_gain);
  }

  ScenarioSetup setup = derive_setup(sc);
  setup.synthesis = synthesize_gains(setup.params, sc.gains, ceiling_basis(sc, setup));
  setup.c1 = check_c1(setup.synthesis.gains, setup.params);
  check_input_bounds(sc.reference_input, setup.synthesis.gains.limits);
  return setup;
}

RunRecord run(const Scenario& scenario) {
  RunRecord rec;
  rec.scenario = scenario;
  rec.setup = prepare(scenario);
  rec.events.warnings = rec.setup.synthesis.warnings;

  const Scenario& sc = rec.scenario;
  const ClosedLoop loop(sc, rec.setup);
  const double h = sc.step;
  const auto steps = static_cast<std::size_t>(std::llround(sc.horizon / h));
  const auto every = static_cast<std::size_t>(sc.record_every);
  rec.samples.reserve(steps / every + 2);

  auto f = [&loop](double s, const SimVector& x) { return loop.derivative(s, x); };

  SimVector x = loop.initial(rec.setup);
  std::optional<std::size_t> last_saturated;
  double prev_fnorm = 0.0;
  for (std::size_t i = 0;; ++i) {
    const double s = static_cast<double>(i) * h;
    const StageControl c = loop.control(s, x);
    if (std::abs(loop.z_of(c.error)) > 1.0) last_saturated = i;
    const double fnorm = observation_norm(c.f);
    if (i > 0) rec.events.observation_error_integral += 0.5 * h * (prev_fnorm + fnorm);
    prev_fnorm = fnorm;
    if (i % every == 0 || i == steps) rec.samples.push_back(loop.sample(s, x, c));
    if (i == steps) break;
    x = integrate_rk4(f, s, x, h);
  }

  if (!last_saturated) {
    rec.events.saturation_exit = 0.0;
  } else if (*last_saturated < steps) {
    rec.events.saturation_exit = static_cast<double>(*last_saturated + 1) * h;
  }
  if (loop.harness()) rec.events.harness_error_integral = loop.harness()->error_integral();
  return rec;
}

bool meets_thresholds(const ErrorState& e, const ConvergenceThresholds& th) {
  return std::hypot(e.e_x, e.e_y) < th.position && std::abs(e.e_psi) < th.heading &&
         std::hypot(e.e_u, e.e_v) < th.velocity;
}

double error_norm(const ErrorState& e) {
  return std::sqrt(e.e_x * e.e_x + e.e_y * e.e_y + e.e_u * e.e_u + e.e_v * e.e_v +
                   e.e_psi * e.e_psi + e.e_r * e.e_r);
}

}  // namespace vtrack
