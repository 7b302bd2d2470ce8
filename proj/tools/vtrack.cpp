// vtrack: validate scenarios, run closed-loop simulations and sweeps, and
// emit CSV records and SVG figures.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "vtrack/errors.hpp"
#include "vtrack/plot.hpp"
#include "vtrack/record_csv.hpp"
#include "vtrack/report.hpp"
#include "vtrack/scenario_file.hpp"
#include "vtrack/sweep.hpp"

namespace fs = std::filesystem;
using namespace vtrack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitDiverged = 3;

struct RunFlags {
  std::string scenario;
  std::string out;
  bool csv = false;
  bool plots = false;
  std::string mode;
  std::optional<double> step;
  std::optional<double> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<double> f0;
  std::optional<double> lambda;
  std::optional<double> diff_gain;
  std::optional<int> record_every;
  bool json = false;
};

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("VTRACK_OUT"); env && *env) return env;
  return "vtrack-out";
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
  }
}

// Flag values are checked here so errors name the flag that caused them.
void apply_overrides(const RunFlags& f, Scenario& sc) {
  auto positive = [](const char* flag, const std::optional<double>& v) {
    if (v && !(*v > 0.0 && std::isfinite(*v))) {
      throw ParameterDomainError(std::string(flag) + " must be finite and > 0");
    }
  };
  positive("--step", f.step);
  positive("--horizon", f.horizon);
  positive("--lambda", f.lambda);
  positive("--diff-gain", f.diff_gain);
  if (f.f0 && !(*f.f0 >= 0.0 && std::isfinite(*f.f0))) {
    throw ParameterDomainError("--f0 must be finite and >= 0");
  }
  if (f.record_every && *f.record_every < 1) {
    throw ParameterDomainError("--record-every must be >= 1");
  }
  if (!f.mode.empty()) {
    try {
      sc.feedback.mode = parse_feedback_mode(f.mode);
    } catch (const std::invalid_argument& e) {
      throw ParameterDomainError(std::string("--mode: ") + e.what());
    }
  }
  if (f.step) sc.step = *f.step;
  if (f.horizon) sc.horizon = *f.horizon;
  if (f.seed) sc.seed = *f.seed;
  if (f.f0) sc.feedback.f0 = *f.f0;
  if (f.lambda) sc.feedback.lambda = *f.lambda;
  if (f.diff_gain) sc.feedback.differentiator_gain = *f.diff_gain;
  if (f.record_every) sc.record_every = *f.record_every;
}

void print_run_summary(const RunRecord& rec) {
  const Sample& last = rec.samples.back();
  const ErrorState& e = last.error;
  std::printf("scenario %s, mode %s, horizon %g, step %g\n", rec.scenario.name.c_str(),
              to_string(rec.scenario.feedback.mode).c_str(), rec.scenario.horizon,
              rec.scenario.step);
  std::printf("terminal |(e_x,e_y)| = %.6g  |e_psi| = %.6g  |(e_u,e_v)| = %.6g  |e_r| = %.6g\n",
              std::hypot(e.e_x, e.e_y), std::abs(e.e_psi), std::hypot(e.e_u, e.e_v),
              std::abs(e.e_r));
  if (rec.events.saturation_exit) {
    std::printf("saturation exit at s = %.6g\n", *rec.events.saturation_exit);
  } else {
    std::printf("yaw channel still saturated at the end of the run\n");
  }
  if (rec.scenario.feedback.mode != FeedbackMode::kState) {
    std::printf("observation error integral (trapezoid) = %.6g\n",
                rec.events.observation_error_integral);
  }
  if (rec.events.harness_error_integral) {
    std::printf("observation error integral (closed form F0/lambda) = %.6g\n",
                *rec.events.harness_error_integral);
  }
  for (const auto& w : rec.events.warnings) std::printf("WARNING %s\n", w.c_str());
}

int cmd_validate(const RunFlags& f) {
  Scenario sc = resolve_scenario(f.scenario);
  apply_overrides(f, sc);
  const ScenarioReport rep = build_report(sc);
  if (f.json) {
    std::cout << to_json(rep).dump(2) << "\n";
  } else {
    std::cout << render_text(rep);
  }
  return rep.ok() ? kExitOk : kExitInvalid;
}

int cmd_run(const RunFlags& f) {
  Scenario sc = resolve_scenario(f.scenario);
  apply_overrides(f, sc);
  const RunRecord rec = run(sc);
  const fs::path dir = output_dir(f.out);
  ensure_dir(dir);
  const fs::path csv = dir / (sc.name + ".csv");
  write_run_csv(csv, rec);
  print_run_summary(rec);
  std::printf("wrote %s\n", csv.string().c_str());
  if (f.plots) {
    for (const auto& p : write_run_figures(load_csv(csv), dir)) {
      std::printf("wrote %s\n", p.string().c_str());
    }
  }
  return kExitOk;
}

int cmd_sweep(const RunFlags& f, const std::string& grid_path, unsigned threads) {
  Scenario sc = resolve_scenario(f.scenario);
  apply_overrides(f, sc);
  ParameterGrid grid = load_grid(grid_path);
  if (f.seed && grid.ic_box) grid.ic_box->seed = *f.seed;
  const auto points = expand_grid(sc, grid);

  const fs::path dir = output_dir(f.out);
  ensure_dir(dir);
  SweepOptions opt;
  opt.threads = threads;
  const SweepResult res = sweep(points, opt);

  std::ofstream summary(dir / "summary.csv", std::ios::binary);
  if (!summary) throw std::runtime_error("cannot write '" + (dir / "summary.csv").string() + "'");
  summary << "run_id,terminal_error_norm,sat_exit_time,status\n";
  for (const SweepRow& row : res.summary) {
    const bool ran = res.runs[row.run_id].has_value();
    summary << row.run_id << ',' << (ran ? format_double(row.terminal_error_norm) : "nan") << ','
            << (row.sat_exit_time ? format_double(*row.sat_exit_time) : "nan") << ','
            << to_string(row.status) << '\n';
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu.csv", row.run_id);
    if (ran) write_run_csv(dir / name, *res.runs[row.run_id]);
    std::printf("%3zu %-14s %-40s %s\n", row.run_id, to_string(row.status).c_str(),
                row.label.c_str(), row.message.c_str());
  }
  std::printf("wrote %s\n", (dir / "summary.csv").string().c_str());
  return kExitOk;
}

int cmd_reference(const RunFlags& f, const std::string& out_path) {
  Scenario sc = resolve_scenario(f.scenario);
  apply_overrides(f, sc);
  const ScenarioSetup setup = prepare(sc);
  const ReferenceTrajectory traj =
      generate_reference(sc.reference_input, setup.reference0, setup.params,
                         setup.synthesis.gains.limits, sc.horizon, sc.step);
  write_reference_csv(out_path, traj, setup.constants.d);
  std::printf("wrote %s\n", out_path.c_str());
  return kExitOk;
}

void add_common(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("scenario", f.scenario, "scenario file or bundled name")->required();
  cmd->add_option("--mode", f.mode, "state | output-diff | output-harness");
  cmd->add_option("--step", f.step, "integration step (scaled time)");
  cmd->add_option("--horizon", f.horizon, "run length (scaled time)");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--f0", f.f0, "observation error amplitude (output-harness)");
  cmd->add_option("--lambda", f.lambda, "observation error decay rate (output-harness)");
  cmd->add_option("--diff-gain", f.diff_gain, "differentiator gain (output-diff)");
  cmd->add_option("--record-every", f.record_every, "keep every n-th step in the record");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saturated tracking control of an underactuated surface vessel"};
  app.require_subcommand(1);
  RunFlags flags;
  std::string grid_path;
  std::string ref_out;
  unsigned threads = 0;

  auto* validate = app.add_subcommand("validate", "derive constants and check every condition");
  add_common(validate, flags);
  validate->add_flag("--json", flags.json, "print the report as JSON");

  auto* run_cmd = app.add_subcommand("run", "simulate one scenario");
  add_common(run_cmd, flags);
  run_cmd->add_option("--out", flags.out, "output directory (default $VTRACK_OUT or vtrack-out)");
  run_cmd->add_flag("--csv", flags.csv, "write the run CSV (always written)");
  run_cmd->add_flag("--plots", flags.plots, "also write the six SVG figures");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter grid");
  add_common(sweep_cmd, flags);
  sweep_cmd->add_option("grid", grid_path, "grid file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", flags.out, "output directory (default $VTRACK_OUT or vtrack-out)");
  sweep_cmd->add_option("--threads", threads, "worker threads (0: all cores)");

  auto* ref_cmd = app.add_subcommand("reference", "export the virtual vessel trajectory as CSV");
  add_common(ref_cmd, flags);
  ref_cmd->add_option("--out", ref_out, "output CSV file")->required();

  std::string dump_name;
  auto* dump = app.add_subcommand("scenario", "print a bundled scenario as a scenario file");
  dump->add_option("name", dump_name, "bundled scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*validate) return cmd_validate(flags);
    if (*run_cmd) return cmd_run(flags);
    if (*sweep_cmd) return cmd_sweep(flags, grid_path, threads);
    if (*ref_cmd) return cmd_reference(flags, ref_out);
    if (*dump) {
      std::cout << write_scenario(bundled_scenario(dump_name));
      return kExitOk;
    }
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ConstraintViolation& e) {
    std::cerr << "error: gain constraints violated\n";
    for (const auto& f : e.failures()) std::cerr << "  " << f << "\n";
    return kExitInvalid;
  } catch (const DivergenceError& e) {
    std::cerr << "error: divergence at s = " << e.time() << ": " << e.what() << "\n";
    return kExitDiverged;
  } catch (const SaturationBudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const AssumptionViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
