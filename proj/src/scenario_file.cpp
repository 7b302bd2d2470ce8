#include "vtrack/scenario_file.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "vtrack/errors.hpp"

namespace vtrack {

namespace {

using Keys = std::initializer_list<std::string_view>;

[[noreturn]] void fail_at(const YAML::Node& node, const std::string& msg) {
  const YAML::Mark m = node.Mark();
  throw ScenarioError(msg, m.line + 1, m.column + 1);
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void expect_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) fail_at(node, "'" + (path.empty() ? "document" : path) + "' must be a mapping");
}

void check_keys(const YAML::Node& node, const std::string& path, Keys allowed) {
  expect_map(node, path);
  for (const auto& kv : node) {
    const std::string key = kv.first.Scalar();
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) fail_at(kv.first, "unknown key '" + join(path, key) + "'");
  }
}

YAML::Node require(const YAML::Node& node, const std::string& path, std::string_view key) {
  const YAML::Node child = node[std::string(key)];
  if (!child) fail_at(node, "missing required key '" + join(path, key) + "'");
  return child;
}

double number(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) fail_at(node, "'" + path + "' must be a number");
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    fail_at(node, "'" + path + "' must be a number, got '" + node.Scalar() + "'");
  }
}

template <class Int>
Int integer(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) fail_at(node, "'" + path + "' must be an integer");
  try {
    return node.as<Int>();
  } catch (const YAML::Exception&) {
    fail_at(node, "'" + path + "' must be an integer, got '" + node.Scalar() + "'");
  }
}

std::string text(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) fail_at(node, "'" + path + "' must be a string");
  return node.Scalar();
}

double req_number(const YAML::Node& node, const std::string& path, std::string_view key) {
  return number(require(node, path, key), join(path, key));
}

void opt_number(const YAML::Node& node, const std::string& path, std::string_view key,
                double& out) {
  if (const YAML::Node c = node[std::string(key)]) out = number(c, join(path, key));
}

void opt_number(const YAML::Node& node, const std::string& path, std::string_view key,
                std::optional<double>& out) {
  if (const YAML::Node c = node[std::string(key)]) out = number(c, join(path, key));
}

std::vector<double> number_list(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) fail_at(node, "'" + path + "' must be a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(number(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::pair<double, double> range(const YAML::Node& node, const std::string& path) {
  const auto v = number_list(node, path);
  if (v.size() != 2 || !(v[0] <= v[1])) fail_at(node, "'" + path + "' must be [low, high]");
  return {v[0], v[1]};
}

YAML::Node load_document(std::string_view src) {
  YAML::Node doc;
  try {
    doc = YAML::Load(std::string(src));
  } catch (const YAML::ParserException& e) {
    throw ScenarioError("parse error: " + e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!doc || doc.IsNull()) throw ScenarioError("parse error: empty document", 1, 1);
  expect_map(doc, "");
  return doc;
}

void check_schema(const YAML::Node& doc, std::string_view expected) {
  const std::string got = text(require(doc, "", "schema"), "schema");
  if (got != expected) {
    fail_at(doc["schema"], "unsupported schema '" + got + "', expected '" +
                               std::string(expected) + "'");
  }
}

VesselState parse_state(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"x", "y", "psi", "u", "v", "r"});
  return {req_number(node, path, "x"), req_number(node, path, "y"), req_number(node, path, "psi"),
          req_number(node, path, "u"), req_number(node, path, "v"), req_number(node, path, "r")};
}

StateUnits parse_units(const YAML::Node& parent, const std::string& path) {
  const YAML::Node n = parent["units"];
  if (!n) return StateUnits::kPhysical;
  const std::string u = text(n, join(path, "units"));
  if (u == "physical") return StateUnits::kPhysical;
  if (u == "normalized") return StateUnits::kNormalized;
  fail_at(n, "'" + join(path, "units") + "' must be 'physical' or 'normalized'");
}

InitialState parse_initial(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"initial", "units", "input"});
  InitialState ic;
  ic.state = parse_state(require(node, path, "initial"), join(path, "initial"));
  ic.units = parse_units(node, path);
  return ic;
}

ReferenceInput parse_input(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"tau1", "tau2", "knots"});
  if (const YAML::Node knots = node["knots"]) {
    if (node["tau1"] || node["tau2"]) {
      fail_at(node, "'" + path + "' takes either knots or tau1/tau2, not both");
    }
    const std::string kp = join(path, "knots");
    if (!knots.IsSequence() || knots.size() == 0) {
      fail_at(knots, "'" + kp + "' must be a non-empty list");
    }
    std::vector<ReferenceInput::Knot> out;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const std::string p = kp + "[" + std::to_string(i) + "]";
      check_keys(knots[i], p, {"s", "tau1", "tau2"});
      out.push_back({req_number(knots[i], p, "s"), req_number(knots[i], p, "tau1"),
                     req_number(knots[i], p, "tau2")});
    }
    try {
      return ReferenceInput(std::move(out));
    } catch (const std::invalid_argument& e) {
      fail_at(knots, "'" + kp + "': " + e.what());
    }
  }
  return ReferenceInput::constant(req_number(node, path, "tau1"), req_number(node, path, "tau2"));
}

GainOverrides parse_gains(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"U1", "U2", "M", "k1", "k2", "tau1_max", "tau2_max"});
  GainOverrides g;
  opt_number(node, path, "U1", g.U1);
  opt_number(node, path, "U2", g.U2);
  opt_number(node, path, "M", g.M);
  opt_number(node, path, "k1", g.k1);
  opt_number(node, path, "k2", g.k2);
  opt_number(node, path, "tau1_max", g.tau1_max);
  opt_number(node, path, "tau2_max", g.tau2_max);
  return g;
}

std::string munk_name(MunkScaling m) {
  return m == MunkScaling::kConsistent ? "consistent" : "printed";
}

std::string units_name(StateUnits u) {
  return u == StateUnits::kPhysical ? "physical" : "normalized";
}

void emit_state(YAML::Emitter& out, const VesselState& s) {
  out << YAML::BeginMap;
  out << YAML::Key << "x" << YAML::Value << s.x;
  out << YAML::Key << "y" << YAML::Value << s.y;
  out << YAML::Key << "psi" << YAML::Value << s.psi;
  out << YAML::Key << "u" << YAML::Value << s.u;
  out << YAML::Key << "v" << YAML::Value << s.v;
  out << YAML::Key << "r" << YAML::Value << s.r;
  out << YAML::EndMap;
}

void emit_opt(YAML::Emitter& out, const char* key, const std::optional<double>& v) {
  if (v) out << YAML::Key << key << YAML::Value << *v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Scenario parse_scenario(std::string_view src) {
  const YAML::Node doc = load_document(src);
  check_keys(doc, "",
             {"schema", "name", "vessel_params", "model", "gains", "reference", "vessel",
              "simulation", "feedback", "seed", "assumption_check"});
  check_schema(doc, kScenarioSchema);

  Scenario sc;
  sc.name = text(require(doc, "", "name"), "name");

  const YAML::Node vp = require(doc, "", "vessel_params");
  check_keys(vp, "vessel_params", {"m1", "m2", "m3", "d1", "d2", "d3"});
  sc.vessel_params = {req_number(vp, "vessel_params", "m1"), req_number(vp, "vessel_params", "m2"),
                      req_number(vp, "vessel_params", "m3"), req_number(vp, "vessel_params", "d1"),
                      req_number(vp, "vessel_params", "d2"), req_number(vp, "vessel_params", "d3")};

  if (const YAML::Node model = doc["model"]) {
    check_keys(model, "model", {"kappa_override", "munk_scaling", "rho"});
    opt_number(model, "model", "kappa_override", sc.kappa_override);
    opt_number(model, "model", "rho", sc.rho);
    if (const YAML::Node m = model["munk_scaling"]) {
      const std::string name = text(m, "model.munk_scaling");
      if (name == "consistent") {
        sc.munk = MunkScaling::kConsistent;
      } else if (name == "printed") {
        sc.munk = MunkScaling::kPrinted;
      } else {
        fail_at(m, "'model.munk_scaling' must be 'consistent' or 'printed'");
      }
    }
  }

  if (const YAML::Node gains = doc["gains"]) sc.gains = parse_gains(gains, "gains");

  const YAML::Node ref = require(doc, "", "reference");
  sc.reference_initial = parse_initial(ref, "reference");
  sc.reference_input = parse_input(require(ref, "reference", "input"), "reference.input");

  const YAML::Node vessel = require(doc, "", "vessel");
  check_keys(vessel, "vessel", {"initial", "units"});
  sc.vessel_initial = parse_initial(vessel, "vessel");

  const YAML::Node sim = require(doc, "", "simulation");
  check_keys(sim, "simulation", {"horizon", "step", "record_every"});
  sc.horizon = req_number(sim, "simulation", "horizon");
  sc.step = req_number(sim, "simulation", "step");
  if (const YAML::Node re = sim["record_every"]) {
    sc.record_every = integer<int>(re, "simulation.record_every");
  }

  if (const YAML::Node fb = doc["feedback"]) {
    check_keys(fb, "feedback", {"mode", "differentiator_gain", "F0", "lambda", "shape"});
    const YAML::Node mode = require(fb, "feedback", "mode");
    try {
      sc.feedback.mode = parse_feedback_mode(text(mode, "feedback.mode"));
    } catch (const std::invalid_argument& e) {
      fail_at(mode, std::string("'feedback.mode': ") + e.what());
    }
    opt_number(fb, "feedback", "differentiator_gain", sc.feedback.differentiator_gain);
    opt_number(fb, "feedback", "F0", sc.feedback.f0);
    opt_number(fb, "feedback", "lambda", sc.feedback.lambda);
    if (const YAML::Node shape = fb["shape"]) {
      const auto v = number_list(shape, "feedback.shape");
      if (v.size() != 3) fail_at(shape, "'feedback.shape' must have three entries");
      sc.feedback.shape = {v[0], v[1], v[2]};
    }
  }

  if (const YAML::Node seed = doc["seed"]) sc.seed = integer<std::uint64_t>(seed, "seed");

  if (const YAML::Node ac = doc["assumption_check"]) {
    check_keys(ac, "assumption_check", {"window", "threshold"});
    opt_number(ac, "assumption_check", "window", sc.assumption_window);
    opt_number(ac, "assumption_check", "threshold", sc.assumption_threshold);
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

std::string write_scenario(const Scenario& sc) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "schema" << YAML::Value << std::string(kScenarioSchema);
  out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << sc.name;

  const PhysicalParams& p = sc.vessel_params;
  out << YAML::Key << "vessel_params" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "m1" << YAML::Value << p.m1 << YAML::Key << "m2" << YAML::Value << p.m2;
  out << YAML::Key << "m3" << YAML::Value << p.m3 << YAML::Key << "d1" << YAML::Value << p.d1;
  out << YAML::Key << "d2" << YAML::Value << p.d2 << YAML::Key << "d3" << YAML::Value << p.d3;
  out << YAML::EndMap;

  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "munk_scaling" << YAML::Value << munk_name(sc.munk);
  emit_opt(out, "kappa_override", sc.kappa_override);
  emit_opt(out, "rho", sc.rho);
  out << YAML::EndMap;

  const GainOverrides& g = sc.gains;
  if (g != GainOverrides{}) {
    out << YAML::Key << "gains" << YAML::Value << YAML::BeginMap;
    emit_opt(out, "U1", g.U1);
    emit_opt(out, "U2", g.U2);
    emit_opt(out, "M", g.M);
    emit_opt(out, "k1", g.k1);
    emit_opt(out, "k2", g.k2);
    emit_opt(out, "tau1_max", g.tau1_max);
    emit_opt(out, "tau2_max", g.tau2_max);
    out << YAML::EndMap;
  }

  out << YAML::Key << "reference" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "input" << YAML::Value << YAML::BeginMap;
  const auto& knots = sc.reference_input.knots();
  if (knots.size() == 1 && knots.front().s == 0.0) {
    out << YAML::Key << "tau1" << YAML::Value << knots.front().tau1;
    out << YAML::Key << "tau2" << YAML::Value << knots.front().tau2;
  } else {
    out << YAML::Key << "knots" << YAML::Value << YAML::BeginSeq;
    for (const auto& k : knots) {
      out << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "s" << YAML::Value << k.s;
      out << YAML::Key << "tau1" << YAML::Value << k.tau1;
      out << YAML::Key << "tau2" << YAML::Value << k.tau2;
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  out << YAML::Key << "initial" << YAML::Value;
  emit_state(out, sc.reference_initial.state);
  out << YAML::Key << "units" << YAML::Value << units_name(sc.reference_initial.units);
  out << YAML::EndMap;

  out << YAML::Key << "vessel" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "initial" << YAML::Value;
  emit_state(out, sc.vessel_initial.state);
  out << YAML::Key << "units" << YAML::Value << units_name(sc.vessel_initial.units);
  out << YAML::EndMap;

  out << YAML::Key << "simulation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "horizon" << YAML::Value << sc.horizon;
  out << YAML::Key << "step" << YAML::Value << sc.step;
  out << YAML::Key << "record_every" << YAML::Value << sc.record_every;
  out << YAML::EndMap;

  const FeedbackConfig& fb = sc.feedback;
  out << YAML::Key << "feedback" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << to_string(fb.mode);
  out << YAML::Key << "differentiator_gain" << YAML::Value << fb.differentiator_gain;
  out << YAML::Key << "F0" << YAML::Value << fb.f0;
  out << YAML::Key << "lambda" << YAML::Value << fb.lambda;
  out << YAML::Key << "shape" << YAML::Value << YAML::Flow << YAML::BeginSeq << fb.shape[0]
      << fb.shape[1] << fb.shape[2] << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "seed" << YAML::Value << sc.seed;
  out << YAML::Key << "assumption_check" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "window" << YAML::Value << sc.assumption_window;
  out << YAML::Key << "threshold" << YAML::Value << sc.assumption_threshold;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

Scenario resolve_scenario(const std::string& name_or_path) {
  std::error_code ec;
  if (std::filesystem::exists(name_or_path, ec)) return load_scenario(name_or_path);
  for (const auto& name : bundled_scenario_names()) {
    if (name == name_or_path) return bundled_scenario(name);
  }
  throw ScenarioError("no scenario file or bundled scenario named '" + name_or_path + "'");
}

ParameterGrid parse_grid(std::string_view src) {
  const YAML::Node doc = load_document(src);
  check_keys(doc, "", {"schema", "ic_box", "harness", "gains"});
  check_schema(doc, kGridSchema);

  ParameterGrid grid;
  if (const YAML::Node box = doc["ic_box"]) {
    check_keys(box, "ic_box", {"count", "seed", "x", "y", "psi"});
    IcBox b;
    if (const YAML::Node n = box["count"]) b.count = integer<std::size_t>(n, "ic_box.count");
    if (const YAML::Node n = box["seed"]) b.seed = integer<std::uint64_t>(n, "ic_box.seed");
    if (const YAML::Node n = box["x"]) b.x = range(n, "ic_box.x");
    if (const YAML::Node n = box["y"]) b.y = range(n, "ic_box.y");
    if (const YAML::Node n = box["psi"]) b.psi = range(n, "ic_box.psi");
    if (b.count == 0) fail_at(box, "'ic_box.count' must be >= 1");
    grid.ic_box = b;
  }
  if (const YAML::Node h = doc["harness"]) {
    check_keys(h, "harness", {"F0", "lambda"});
    HarnessGrid hg;
    hg.f0 = number_list(require(h, "harness", "F0"), "harness.F0");
    hg.lambda = number_list(require(h, "harness", "lambda"), "harness.lambda");
    if (hg.f0.empty() || hg.lambda.empty()) fail_at(h, "'harness' lists must not be empty");
    grid.harness = hg;
  }
  if (const YAML::Node gains = doc["gains"]) {
    if (!gains.IsSequence()) fail_at(gains, "'gains' must be a list of gain sets");
    for (std::size_t i = 0; i < gains.size(); ++i) {
      grid.gains.push_back(parse_gains(gains[i], "gains[" + std::to_string(i) + "]"));
    }
  }
  return grid;
}

ParameterGrid load_grid(const std::filesystem::path& path) { return parse_grid(read_file(path)); }

}  // namespace vtrack
