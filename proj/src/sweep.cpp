#include "vtrack/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vtrack/errors.hpp"

namespace vtrack {

namespace {

std::string gain_label(const GainOverrides& g) {
  std::ostringstream os;
  os.precision(6);
  auto put = [&](const char* name, const std::optional<double>& v) {
    if (v) os << name << '=' << *v << ' ';
  };
  put("U1", g.U1);
  put("U2", g.U2);
  put("M", g.M);
  put("k1", g.k1);
  put("k2", g.k2);
  put("tau1_max", g.tau1_max);
  put("tau2_max", g.tau2_max);
  std::string s = os.str();
  if (!s.empty()) s.pop_back();
  return s.empty() ? "default-gains" : s;
}

struct Bounds {
  double speed = 0.0;
  double yaw_rate = 0.0;
};

Bounds ic_bounds(const Scenario& base) {
  try {
    const ScenarioSetup setup = prepare(base);
    const auto& lim = setup.synthesis.gains.limits;
    return {surge_sway_limsup_bound(setup.params, lim.tau1_max),
            yaw_rate_limsup_bound(setup.params, lim)};
  } catch (const std::exception&) {
    return {0.0, 0.0};
  }
}

std::vector<std::pair<std::string, InitialState>> draw_ics(const Scenario& base, const IcBox& box) {
  const Bounds b = ic_bounds(base);
  std::mt19937_64 rng(box.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto in = [&](const std::pair<double, double>& r) {
    return r.first + (r.second - r.first) * unit(rng);
  };
  std::vector<std::pair<std::string, InitialState>> out;
  for (std::size_t i = 0; i < box.count; ++i) {
    InitialState ic;
    ic.units = StateUnits::kNormalized;
    ic.state.x = in(box.x);
    ic.state.y = in(box.y);
    ic.state.psi = in(box.psi);
    const double radius = b.speed * std::sqrt(unit(rng));
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    ic.state.u = radius * std::cos(angle);
    ic.state.v = radius * std::sin(angle);
    ic.state.r = b.yaw_rate * (2.0 * unit(rng) - 1.0);
    out.emplace_back("ic" + std::to_string(i), ic);
  }
  return out;
}

RunStatus classify(const RunRecord& rec, const ConvergenceThresholds& th) {
  return meets_thresholds(rec.samples.back().error, th) ? RunStatus::kConverged
                                                        : RunStatus::kNotConverged;
}

}  // namespace

std::vector<GridPoint> expand_grid(const Scenario& base, const ParameterGrid& grid) {
  std::vector<GridPoint> points{{"base", base}};

  auto product = [&points](auto&& variants) {
    std::vector<GridPoint> next;
    for (const auto& p : points) {
      for (const auto& [label, apply] : variants) {
        GridPoint q = p;
        apply(q.scenario);
        q.label = p.label == "base" ? label : p.label + " " + label;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  };

  using Variant = std::pair<std::string, std::function<void(Scenario&)>>;

  if (grid.ic_box) {
    std::vector<Variant> v;
    for (auto& [label, ic] : draw_ics(base, *grid.ic_box)) {
      v.emplace_back(label, [ic](Scenario& s) { s.vessel_initial = ic; });
    }
    product(v);
  }
  if (grid.harness) {
    std::vector<Variant> v;
    for (double f0 : grid.harness->f0) {
      for (double lambda : grid.harness->lambda) {
        std::ostringstream label;
        label << "F0=" << f0 << " lambda=" << lambda;
        v.emplace_back(label.str(), [f0, lambda](Scenario& s) {
          s.feedback.mode = FeedbackMode::kOutputHarness;
          s.feedback.f0 = f0;
          s.feedback.lambda = lambda;
        });
      }
    }
    product(v);
  }
  if (!grid.gains.empty()) {
    std::vector<Variant> v;
    for (const GainOverrides& g : grid.gains) {
      v.emplace_back(gain_label(g), [g](Scenario& s) { s.gains = g; });
    }
    product(v);
  }
  if (points.empty()) throw std::invalid_argument("parameter grid is empty");
  return points;
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kConverged:
      return "converged";
    case RunStatus::kNotConverged:
      return "not_converged";
    case RunStatus::kRejected:
      return "rejected";
    case RunStatus::kDiverged:
      return "diverged";
  }
  return "rejected";
}

SweepResult sweep(const std::vector<GridPoint>& points, const SweepOptions& options) {
  if (points.empty()) throw std::invalid_argument("sweep needs at least one grid point");
  SweepResult result;
  result.runs.resize(points.size());
  result.summary.resize(points.size());

  auto work = [&](std::size_t i) {
    SweepRow& row = result.summary[i];
    row.run_id = i;
    row.label = points[i].label;
    try {
      RunRecord rec = run(points[i].scenario);
      row.terminal_error_norm = error_norm(rec.samples.back().error);
      row.sat_exit_time = rec.events.saturation_exit;
      row.status = classify(rec, options.thresholds);
      if (options.keep_records) result.runs[i] = std::move(rec);
    } catch (const DivergenceError& e) {
      row.status = RunStatus::kDiverged;
      row.message = e.what();
    } catch (const SaturationBudgetError& e) {
      row.status = RunStatus::kDiverged;
      row.message = e.what();
    } catch (const std::exception& e) {
      row.status = RunStatus::kRejected;
      row.message = e.what();
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(points.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) work(i);
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return result;
}

}  // namespace vtrack
