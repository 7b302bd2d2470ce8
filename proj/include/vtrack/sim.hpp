#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vtrack/control.hpp"
#include "vtrack/model.hpp"
#include "vtrack/observer.hpp"
#include "vtrack/reference.hpp"

namespace vtrack {

enum class FeedbackMode { kState, kOutputDifferentiator, kOutputHarness };

std::string to_string(FeedbackMode mode);
FeedbackMode parse_feedback_mode(const std::string& text);  // "state", "output-diff", "output-harness"

struct FeedbackConfig {
  FeedbackMode mode = FeedbackMode::kState;
  double differentiator_gain = 50.0;
  double f0 = 0.0;
  double lambda = 1.0;
  std::array<double, 3> shape{1.0, 1.0, 1.0};

  bool operator==(const FeedbackConfig&) const = default;
};

enum class StateUnits { kPhysical, kNormalized };

struct InitialState {
  VesselState state;
  StateUnits units = StateUnits::kPhysical;

  bool operator==(const InitialState&) const = default;
};

struct Scenario {
  std::string name = "unnamed";
  PhysicalParams vessel_params;
  std::optional<double> kappa_override;
  MunkScaling munk = MunkScaling::kConsistent;
  std::optional<double> rho;  // default a1/4
  GainOverrides gains;
  ReferenceInput reference_input;
  InitialState reference_initial;
  InitialState vessel_initial;
  double horizon = 600.0;  // scaled time
  double step = 1e-3;      // scaled time
  int record_every = 1;
  FeedbackConfig feedback;
  std::uint64_t seed = 0;
  double assumption_window = 100.0;
  double assumption_threshold = 1e-2;

  bool operator==(const Scenario&) const = default;
};

// The monohull vessel and experiment used throughout the acceptance suite:
// physical ICs (50 m, -150 m, pi/4, 50 m/s, 0, 0), tau_re = (10, 0.05).
Scenario paper_monohull_scenario();

// Same vessel and gains with the vessel starting 20 m off the reference at rest.
Scenario moderate_monohull_scenario();

// Throws std::invalid_argument for an unknown name.
Scenario bundled_scenario(const std::string& name);
std::vector<std::string> bundled_scenario_names();

// Everything derived from a Scenario before integration.
struct ScenarioSetup {
  PrimitiveConstants constants;
  PrimitiveConstants derived_constants;  // before any kappa override
  ScaledParams params;
  GainSynthesis synthesis;
  C1Report c1;
  VesselState vessel0;     // normalized
  VesselState reference0;  // normalized
};

// Ceiling inputs: peak reference inputs, initial speeds from setup.vessel0 and
// setup.reference0, and F0 in harness mode.
CeilingBasis ceiling_basis(const Scenario& scenario, const ScenarioSetup& setup);

// Derivation only: constants, scaled parameters, normalized initial states,
// evaluate_gains and C1. Throws ParameterDomainError for bad vessel
// parameters but not for failed gain inequalities.
ScenarioSetup derive_setup(const Scenario& scenario);

// Validates the scenario shape (step, horizon, mode fields) and derives the
// constants, gains and normalized initial states. Propagates
// ParameterDomainError, ConstraintViolation and AssumptionViolation.
ScenarioSetup prepare(const Scenario& scenario);

struct Sample {
  double s = 0.0;
  VesselState vessel;
  VesselState ref;
  ErrorState error;
  ControlInput tau;
  FeedbackOutput w;
  double V = 0.0;    // alpha/2 e_r^2 + S(z)
  double Vuv = 0.0;  // (u^2 + v^2)/2
  double G = 0.0;    // (e_u^2 + e_v^2)/2
  double z = 0.0;    // (k1 e_psi + (k2 - 1) e_r) / U2
  double W1 = 0.0;   // e_x + e_u / mu
  double W2 = 0.0;   // e_y + e_v / mu
  double Wt1 = 0.0;  // R(psi_re) W
  double Wt2 = 0.0;
  ObservationError f;
};

struct RunEvents {
  // First sample time after which |z| <= 1 holds for the rest of the run;
  // empty if the run ends saturated.
  std::optional<double> saturation_exit;
  std::vector<std::string> warnings;
  // Trapezoidal integral of ||f|| over the run at full step resolution.
  double observation_error_integral = 0.0;
  // Closed-form F0 / lambda in harness mode.
  std::optional<double> harness_error_integral;
};

struct RunRecord {
  Scenario scenario;
  ScenarioSetup setup;
  std::vector<Sample> samples;
  RunEvents events;
};

// Co-integrates vessel and virtual vessel with RK4 on a fixed grid, evaluating
// the feedback law at every stage. Deterministic for a given scenario.
// Throws DivergenceError or SaturationBudgetError during integration.
RunRecord run(const Scenario& scenario);

struct ConvergenceThresholds {
  double position = 1e-2;
  double heading = 1e-3;
  double velocity = 1e-3;
};

bool meets_thresholds(const ErrorState& e, const ConvergenceThresholds& th);

// Euclidean norm of all six tracking errors.
double error_norm(const ErrorState& e);

}  // namespace vtrack
