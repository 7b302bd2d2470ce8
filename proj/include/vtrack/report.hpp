#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vtrack/sim.hpp"

namespace vtrack {

struct DiscrepancyNote {
  std::string topic;  // "kappa-sign", "beta-listing", "u1-inequality", ...
  std::string text;
};

// Everything `validate` prints: derived constants, one row per gain
// inequality, the actuator-budget condition, the reference heading witness
// and notes on known inconsistencies in the parameter set.
struct ScenarioReport {
  std::string name;
  MunkScaling munk = MunkScaling::kConsistent;
  PrimitiveConstants constants;
  PrimitiveConstants derived_constants;
  ScaledParams params;
  ControllerGains gains;
  std::vector<ConstraintCheck> checks;
  C1Report c1;
  std::optional<Assumption1Report> assumption1;
  std::string assumption1_error;  // why the witness could not be computed
  std::optional<double> harness_error_integral;
  std::vector<std::string> hard_errors;
  std::vector<std::string> warnings;
  std::vector<DiscrepancyNote> notes;

  bool ok() const { return hard_errors.empty(); }
};

// Runs the derivation and every check without integrating the closed loop
// (the virtual vessel is integrated for the heading witness). Anything
// prepare() would reject lands in hard_errors. Throws ParameterDomainError
// only when the vessel parameters themselves are unusable.
ScenarioReport build_report(const Scenario& scenario);

std::string render_text(const ScenarioReport& report);
nlohmann::json to_json(const ScenarioReport& report);

}  // namespace vtrack
