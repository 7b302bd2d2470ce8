#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vtrack/sim.hpp"

namespace vtrack {

// Random initial conditions: positions and heading uniform in the given
// ranges, (u, v) uniform in the disc of the surge/sway ultimate bound and r
// uniform within the yaw-rate bound (all normalized).
struct IcBox {
  std::size_t count = 8;
  std::uint64_t seed = 1;
  std::pair<double, double> x{-200.0, 200.0};
  std::pair<double, double> y{-200.0, 200.0};
  std::pair<double, double> psi{-3.141592653589793, 3.141592653589793};

  bool operator==(const IcBox&) const = default;
};

struct HarnessGrid {
  std::vector<double> f0;
  std::vector<double> lambda;

  bool operator==(const HarnessGrid&) const = default;
};

// Axes absent from the grid keep the base scenario's value; present axes are
// combined as a cartesian product.
struct ParameterGrid {
  std::optional<IcBox> ic_box;
  std::optional<HarnessGrid> harness;
  std::vector<GainOverrides> gains;

  bool operator==(const ParameterGrid&) const = default;
};

struct GridPoint {
  std::string label;
  Scenario scenario;
};

// Throws std::invalid_argument when the grid yields no point. Drawing the IC
// box needs the base scenario's derived bounds; if the base itself is
// infeasible the box falls back to the reference initial velocity.
std::vector<GridPoint> expand_grid(const Scenario& base, const ParameterGrid& grid);

enum class RunStatus { kConverged, kNotConverged, kRejected, kDiverged };

std::string to_string(RunStatus status);

struct SweepRow {
  std::size_t run_id = 0;
  std::string label;
  double terminal_error_norm = 0.0;
  std::optional<double> sat_exit_time;
  RunStatus status = RunStatus::kRejected;
  std::string message;
};

struct SweepOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  bool keep_records = true;
  ConvergenceThresholds thresholds;
};

struct SweepResult {
  std::vector<std::optional<RunRecord>> runs;  // empty where the run failed
  std::vector<SweepRow> summary;
};

// Runs every point; per-run failures are recorded in the summary rather than
// thrown. Points run concurrently; results are ordered by run_id.
SweepResult sweep(const std::vector<GridPoint>& points, const SweepOptions& options = {});

}  // namespace vtrack
