#include "vtrack/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "vtrack/errors.hpp"

namespace vtrack {

namespace {

std::string num(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string severity_name(Severity s) { return s == Severity::kHard ? "hard" : "warning"; }

std::string check_status(const ConstraintCheck& c) {
  if (c.passed) return "PASS";
  return c.severity == Severity::kHard ? "FAIL" : "WARNING";
}

void collect_prepare_errors(const Scenario& sc, ScenarioReport& rep) {
  try {
    prepare(sc);
  } catch (const ConstraintViolation& e) {
    for (const auto& f : e.failures()) rep.hard_errors.push_back("constraint violated: " + f);
  } catch (const std::exception& e) {
    rep.hard_errors.push_back(e.what());
  }
}

void add_notes(const Scenario& sc, ScenarioReport& rep) {
  const PrimitiveConstants& k = rep.derived_constants;
  if (sc.kappa_override) {
    rep.notes.push_back({"kappa-sign", "kappa overridden to " + num(*sc.kappa_override) +
                                           "; the masses give (m1 - m2)/m3 = " + num(k.kappa)});
  } else if (k.kappa < 0.0) {
    rep.notes.push_back(
        {"kappa-sign", "kappa = (m1 - m2)/m3 = " + num(k.kappa) +
                           " is negative (m1 < m2) and is used with its sign, so beta < 0. "
                           "A positive kappa of the same magnitude flips the Munk term; set "
                           "model.kappa_override to use it."});
  } else {
    rep.notes.push_back({"kappa-sign", "kappa = (m1 - m2)/m3 = " + num(k.kappa) + " (m1 >= m2)"});
  }

  const std::string formula = rep.munk == MunkScaling::kConsistent ? "kappa c rho^2"
                                                                   : "kappa / (c rho^2)";
  rep.notes.push_back(
      {"beta-listing", "beta = " + formula + " = " + num(rep.params.beta) +
                           " is always computed, never read from a parameter listing. The "
                           "yaw damping rate d = " + num(rep.constants.d) +
                           " is a different quantity; a listed beta equal to d is a typo."});
  if (rep.munk == MunkScaling::kPrinted) {
    rep.notes.push_back({"munk-scaling",
                         "beta = kappa / (c rho^2) does not map kappa u v onto the normalized "
                         "states; normalized and physical runs will disagree"});
  }

  for (const ConstraintCheck& c : rep.checks) {
    if (c.severity == Severity::kWarning && !c.passed) {
      rep.notes.push_back({"u1-inequality",
                           "U1 = " + num(c.lhs) + " does not exceed |a1 - b1/c| rho / "
                           "min(a1, b1/c) = " + num(c.rhs) +
                           "; reported as a warning, the run proceeds with these gains"});
    }
  }
  rep.notes.push_back({"reference-heading",
                       "the non-convergence of psi_re is checked heuristically from the "
                       "trailing total variation over a finite horizon; it is not a proof"});
}

}  // namespace

ScenarioReport build_report(const Scenario& sc) {
  ScenarioReport rep;
  rep.name = sc.name;
  rep.munk = sc.munk;

  const ScenarioSetup setup = derive_setup(sc);
  rep.constants = setup.constants;
  rep.derived_constants = setup.derived_constants;
  rep.params = setup.params;
  rep.gains = setup.synthesis.gains;
  rep.checks = setup.synthesis.checks;
  rep.c1 = setup.c1;
  rep.warnings = setup.synthesis.warnings;
  if (!rep.c1.satisfied) {
    rep.warnings.push_back("actuator budget condition fails: beta tau1_max^2 / (a1 m_rate) = " +
                           num(rep.c1.lhs) + " >= tau2_max = " + num(rep.c1.rhs));
  }
  collect_prepare_errors(sc, rep);

  if (sc.feedback.mode == FeedbackMode::kOutputHarness && sc.feedback.lambda > 0.0) {
    rep.harness_error_integral = sc.feedback.f0 / sc.feedback.lambda;
  }

  try {
    const double horizon = sc.horizon;
    const ReferenceTrajectory traj = generate_reference(
        sc.reference_input, setup.reference0, setup.params, rep.gains.limits, horizon, sc.step);
    rep.assumption1 = check_assumption1(traj, std::min(sc.assumption_window, traj.s.back()),
                                        sc.assumption_threshold);
    if (rep.assumption1->heading == HeadingFlag::kLikelyViolated) {
      rep.warnings.push_back("reference heading is likely convergent (trailing variation " +
                             num(rep.assumption1->trailing_heading_variation) + " rad)");
    }
  } catch (const std::exception& e) {
    rep.assumption1_error = e.what();
  }

  add_notes(sc, rep);
  return rep;
}

std::string render_text(const ScenarioReport& r) {
  std::ostringstream os;
  os << "scenario: " << r.name << "\n\n";
  os << "derived constants\n";
  auto row = [&os](const std::string& name, double v) {
    os << "  " << std::left << std::setw(6) << name << num(v, 10) << "\n";
  };
  row("a", r.constants.a);
  row("b", r.constants.b);
  row("c", r.constants.c);
  row("d", r.constants.d);
  row("kappa", r.constants.kappa);
  row("a1", r.params.a1);
  row("b1", r.params.b1);
  row("beta", r.params.beta);
  row("mu", r.params.mu);
  row("xi", r.params.xi);
  os << "  (rho = " << num(r.params.rho, 10) << ", Munk scaling "
     << (r.munk == MunkScaling::kConsistent ? "consistent" : "printed") << ")\n\n";

  const ControllerGains& g = r.gains;
  os << "gains\n";
  os << "  U1=" << num(g.U1) << " U2=" << num(g.U2) << " M=" << num(g.M) << " k1=" << num(g.k1)
     << " k2=" << num(g.k2) << " alpha=" << num(g.alpha) << "\n";
  os << "  tau1_max=" << num(g.limits.tau1_max) << " tau2_max=" << num(g.limits.tau2_max)
     << " m_rate=" << num(g.m_rate) << "\n\n";

  os << "gain constraints\n";
  for (const ConstraintCheck& c : r.checks) {
    os << "  " << std::left << std::setw(8) << check_status(c) << std::setw(40) << c.expression
       << "lhs=" << num(c.lhs) << "  rhs=" << num(c.rhs) << "\n";
  }
  os << "\nactuator budget: beta tau1_max^2 / (a1 m_rate) < tau2_max\n";
  os << "  " << (r.c1.satisfied ? "PASS" : "FAIL") << "  lhs=" << num(r.c1.lhs)
     << " (|lhs|=" << num(r.c1.lhs_magnitude) << ")  rhs=" << num(r.c1.rhs)
     << "  rho floor=" << num(r.c1.rho_floor) << "\n\n";

  os << "reference heading witness\n";
  if (r.assumption1) {
    const Assumption1Report& a = *r.assumption1;
    os << "  max|u_re|=" << num(a.max_abs_u) << " max|v_re|=" << num(a.max_abs_v)
       << " bound=" << num(a.velocity_bound) << (a.velocities_within_bound ? " ok" : " EXCEEDED")
       << "\n";
    os << "  max|tau1_re|=" << num(a.max_abs_tau1) << " max|tau2_re|=" << num(a.max_abs_tau2)
       << (a.inputs_within_bound ? " ok" : " EXCEEDED") << "\n";
    os << "  trailing variation of psi_re over " << num(a.window) << ": "
       << num(a.trailing_heading_variation) << " rad (threshold " << num(a.variation_threshold)
       << ") -> " << to_string(a.heading) << "\n";
  } else {
    os << "  not computed: " << r.assumption1_error << "\n";
  }
  if (r.harness_error_integral) {
    os << "\nobservation error integral (closed form F0/lambda): "
       << num(*r.harness_error_integral) << "\n";
  }

  os << "\nnotes\n";
  for (const auto& n : r.notes) os << "  [" << n.topic << "] " << n.text << "\n";
  if (!r.warnings.empty()) {
    os << "\nwarnings\n";
    for (const auto& w : r.warnings) os << "  WARNING " << w << "\n";
  }
  if (!r.hard_errors.empty()) {
    os << "\nerrors\n";
    for (const auto& e : r.hard_errors) os << "  ERROR " << e << "\n";
  }
  os << "\nstatus: " << (r.ok() ? (r.warnings.empty() ? "OK" : "OK with warnings") : "INVALID")
     << "\n";
  return os.str();
}

nlohmann::json to_json(const ScenarioReport& r) {
  using nlohmann::json;
  json j;
  j["name"] = r.name;
  j["munk_scaling"] = r.munk == MunkScaling::kConsistent ? "consistent" : "printed";
  j["constants"] = {{"a", r.constants.a},       {"b", r.constants.b},   {"c", r.constants.c},
                    {"d", r.constants.d},       {"kappa", r.constants.kappa},
                    {"a1", r.params.a1},        {"b1", r.params.b1},    {"beta", r.params.beta},
                    {"mu", r.params.mu},        {"xi", r.params.xi},    {"rho", r.params.rho}};
  const ControllerGains& g = r.gains;
  j["gains"] = {{"U1", g.U1},           {"U2", g.U2},       {"M", g.M},
                {"k1", g.k1},           {"k2", g.k2},       {"alpha", g.alpha},
                {"tau1_max", g.limits.tau1_max},            {"tau2_max", g.limits.tau2_max},
                {"m_rate", g.m_rate}};
  j["constraints"] = json::array();
  for (const ConstraintCheck& c : r.checks) {
    j["constraints"].push_back({{"expression", c.expression},
                                {"lhs", c.lhs},
                                {"rhs", c.rhs},
                                {"passed", c.passed},
                                {"severity", severity_name(c.severity)}});
  }
  j["c1"] = {{"lhs", r.c1.lhs},
             {"lhs_magnitude", r.c1.lhs_magnitude},
             {"rhs", r.c1.rhs},
             {"satisfied", r.c1.satisfied},
             {"rho_floor", r.c1.rho_floor}};
  if (r.assumption1) {
    const Assumption1Report& a = *r.assumption1;
    j["assumption1"] = {{"max_abs_u", a.max_abs_u},
                        {"max_abs_v", a.max_abs_v},
                        {"max_abs_tau1", a.max_abs_tau1},
                        {"max_abs_tau2", a.max_abs_tau2},
                        {"velocity_bound", a.velocity_bound},
                        {"velocities_within_bound", a.velocities_within_bound},
                        {"inputs_within_bound", a.inputs_within_bound},
                        {"window", a.window},
                        {"trailing_heading_variation", a.trailing_heading_variation},
                        {"variation_threshold", a.variation_threshold},
                        {"heading", to_string(a.heading)}};
  } else {
    j["assumption1"] = {{"error", r.assumption1_error}};
  }
  if (r.harness_error_integral) j["observation_error_integral"] = *r.harness_error_integral;
  j["notes"] = json::array();
  for (const auto& n : r.notes) j["notes"].push_back({{"topic", n.topic}, {"text", n.text}});
  j["warnings"] = r.warnings;
  j["errors"] = r.hard_errors;
  j["ok"] = r.ok();
  return j;
}

}  // namespace vtrack
