#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "vtrack/diagnostics.hpp"
#include "vtrack/errors.hpp"
#include "vtrack/integrator.hpp"
#include "vtrack/sim.hpp"
#include "vtrack/sweep.hpp"

using namespace vtrack;

namespace {

using Vec1 = Eigen::Matrix<double, 1, 1>;

double decay_error(double h) {
  Vec1 x;
  x << 1.0;
  const int n = static_cast<int>(std::lround(1.0 / h));
  for (int i = 0; i < n; ++i) {
    x = integrate_rk4([](double, const Vec1& y) { return Vec1(-y); }, i * h, x, h);
  }
  return std::abs(x(0) - std::exp(-1.0));
}

Scenario short_monohull(double horizon) {
  Scenario sc = paper_monohull_scenario();
  sc.horizon = horizon;
  sc.step = 1e-3;
  return sc;
}

}  // namespace

TEST_CASE("rk4 step") {
  Vec1 x;
  x << 2.0;
  CHECK(integrate_rk4([](double, const Vec1&) { return Vec1::Zero().eval(); }, 0.0, x, 0.1)(0) ==
        2.0);
  x << 1.0;
  const double h = 0.1;
  // the tableau on x' = -x reduces to the quartic Taylor polynomial of e^-h
  const double taylor = 1 - h + h * h / 2 - h * h * h / 6 + h * h * h * h / 24;
  const Vec1 y = integrate_rk4([](double, const Vec1& v) { return Vec1(-v); }, 0.0, x, h);
  CHECK(y(0) == doctest::Approx(taylor).epsilon(1e-15));
  CHECK(y(0) == doctest::Approx(0.9048375).epsilon(1e-7));
  const double ratio = decay_error(0.1) / decay_error(0.05);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("rk4 divergence guard") {
  Vec1 x;
  x << 1.0;
  CHECK_THROWS_AS(integrate_rk4([](double, const Vec1&) { return Vec1(Vec1::Constant(NAN)); },
                                0.0, x, 0.1),
                  DivergenceError);
  try {
    integrate_rk4([](double, const Vec1&) { return Vec1(Vec1::Constant(1e12)); }, 2.0, x, 0.5);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.time() == 2.5);
  }
}

TEST_CASE("scenario validation") {
  Scenario sc = short_monohull(1.0);
  sc.step = 0.0;
  CHECK_THROWS_AS(prepare(sc), ParameterDomainError);
  sc = short_monohull(1.0);
  sc.horizon = 0.5e-3;
  CHECK_THROWS_AS(prepare(sc), ParameterDomainError);
  sc = short_monohull(1.0);
  sc.feedback.mode = FeedbackMode::kOutputHarness;
  sc.feedback.lambda = 0.0;
  CHECK_THROWS_AS(prepare(sc), ParameterDomainError);
  sc = short_monohull(1.0);
  sc.gains.k2 = 0.5;
  CHECK_THROWS_AS(prepare(sc), ConstraintViolation);
  CHECK(parse_feedback_mode("output-diff") == FeedbackMode::kOutputDifferentiator);
  CHECK(to_string(FeedbackMode::kOutputHarness) == "output-harness");
  CHECK_THROWS_AS(parse_feedback_mode("magic"), std::invalid_argument);
}

TEST_CASE("vessel started on the reference stays on it") {
  Scenario sc = short_monohull(50.0);
  sc.vessel_initial = sc.reference_initial;
  const RunRecord rec = run(sc);
  for (const Sample& m : rec.samples) CHECK(error_norm(m.error) < 1e-12);
  CHECK(rec.events.saturation_exit == 0.0);
}

TEST_CASE("runs are deterministic and respect the ceilings") {
  const Scenario sc = short_monohull(20.0);
  const RunRecord a = run(sc);
  const RunRecord b = run(sc);
  REQUIRE(a.samples.size() == 20001);
  REQUIRE(a.samples.size() == b.samples.size());
  const ActuatorLimits& lim = a.setup.synthesis.gains.limits;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const Sample& p = a.samples[i];
    const Sample& q = b.samples[i];
    CHECK(p.vessel == q.vessel);
    CHECK(p.tau.tau1 == q.tau.tau1);
    CHECK(p.tau.tau2 == q.tau.tau2);
    CHECK(std::abs(p.tau.tau1) <= lim.tau1_max);
    CHECK(std::abs(p.tau.tau2) <= lim.tau2_max);
  }
}

TEST_CASE("recorded diagnostics match their definitions") {
  Scenario sc = short_monohull(10.0);
  sc.record_every = 100;
  const RunRecord rec = run(sc);
  CHECK(rec.samples.size() == 101);
  const ControllerGains& g = rec.setup.synthesis.gains;
  for (const Sample& m : rec.samples) {
    const ErrorState& e = m.error;
    const double z = (g.k1 * e.e_psi + (g.k2 - 1) * e.e_r) / g.U2;
    CHECK(m.z == doctest::Approx(z));
    CHECK(m.V == doctest::Approx(0.5 * g.alpha * e.e_r * e.e_r + saturation_potential(z)));
    CHECK(m.G == doctest::Approx(0.5 * (e.e_u * e.e_u + e.e_v * e.e_v)));
    CHECK(m.Vuv == doctest::Approx(0.5 * (m.vessel.u * m.vessel.u + m.vessel.v * m.vessel.v)));
    CHECK(m.W1 == doctest::Approx(e.e_x + e.e_u / g.mu));
    CHECK(m.W2 == doctest::Approx(e.e_y + e.e_v / g.mu));
    const double c = std::cos(m.ref.psi), s = std::sin(m.ref.psi);
    CHECK(m.Wt1 == doctest::Approx(c * m.W1 - s * m.W2).scale(1.0));
    CHECK(m.Wt2 == doctest::Approx(s * m.W1 + c * m.W2).scale(1.0));
    CHECK(m.f.f_u == 0.0);
  }
}

TEST_CASE("harness with zero amplitude reproduces state feedback") {
  Scenario sc = short_monohull(15.0);
  const RunRecord state = run(sc);
  sc.feedback.mode = FeedbackMode::kOutputHarness;
  sc.feedback.f0 = 0.0;
  sc.feedback.lambda = 1.0;
  const RunRecord harness = run(sc);
  REQUIRE(state.samples.size() == harness.samples.size());
  bool same = true;
  for (std::size_t i = 0; i < state.samples.size(); ++i) {
    same = same && state.samples[i].tau.tau1 == harness.samples[i].tau.tau1 &&
           state.samples[i].tau.tau2 == harness.samples[i].tau.tau2;
  }
  CHECK(same);
  CHECK(harness.events.harness_error_integral == 0.0);
}

TEST_CASE("harness observation errors follow the configured envelope") {
  Scenario sc = short_monohull(10.0);
  sc.feedback.mode = FeedbackMode::kOutputHarness;
  sc.feedback.f0 = 0.5;
  sc.feedback.lambda = 1.0;
  const RunRecord rec = run(sc);
  for (const Sample& m : rec.samples) {
    const double n = std::sqrt(m.f.f_u * m.f.f_u + m.f.f_v * m.f.f_v + m.f.f_r * m.f.f_r);
    CHECK(n == doctest::Approx(0.5 * std::exp(-m.s)).scale(1e-15));
  }
  REQUIRE(rec.events.harness_error_integral);
  CHECK(*rec.events.harness_error_integral == 0.5);
  // trapezoid over [0, 10] of 0.5 e^-s
  CHECK(rec.events.observation_error_integral ==
        doctest::Approx(0.5 * (1 - std::exp(-10.0))).epsilon(1e-6));
}

TEST_CASE("differentiator mode runs and reports its error integral") {
  Scenario sc = short_monohull(10.0);
  sc.feedback.mode = FeedbackMode::kOutputDifferentiator;
  const RunRecord rec = run(sc);
  CHECK(std::isfinite(rec.events.observation_error_integral));
  CHECK(rec.events.observation_error_integral > 0.0);
  CHECK_FALSE(rec.events.harness_error_integral);
  const Sample& last = rec.samples.back();
  CHECK(std::abs(last.f.f_u) < 1e-2 * std::abs(last.vessel.u));
}

TEST_CASE("yaw subsystem leaves saturation and decays") {
  const RunRecord rec = run(short_monohull(40.0));
  REQUIRE(rec.events.saturation_exit);
  CHECK(*rec.events.saturation_exit > 0.0);
  CHECK(*rec.events.saturation_exit < 40.0);
  const auto fit = heading_decay_fit(rec, *rec.events.saturation_exit);
  REQUIRE(fit);
  CHECK(fit->slope < 0.0);
  CHECK(slow_heading_eigenvalue(10, 10) == doctest::Approx(-5 + std::sqrt(15.0)));
  CHECK(lyapunov_decrease(rec, 10 * 1e-6).fraction() >= 0.999);
}

TEST_CASE("sweeps") {
  const Scenario base = short_monohull(5.0);
  SUBCASE("one point matches a single run") {
    const auto points = expand_grid(base, {});
    REQUIRE(points.size() == 1);
    const SweepResult res = sweep(points);
    const RunRecord single = run(base);
    REQUIRE(res.runs[0]);
    CHECK(res.runs[0]->samples.back().vessel == single.samples.back().vessel);
    CHECK(res.summary[0].terminal_error_norm == error_norm(single.samples.back().error));
  }
  SUBCASE("infeasible gains are rejected per row") {
    ParameterGrid grid;
    GainOverrides bad;
    bad.k1 = 5.0;
    bad.k2 = 7.0;
    grid.gains = {GainOverrides{}, bad, bad};
    SweepOptions opt;
    opt.threads = 2;
    const SweepResult res = sweep(expand_grid(base, grid), opt);
    REQUIRE(res.summary.size() == 3);
    CHECK(res.summary[0].status != RunStatus::kRejected);
    CHECK(res.summary[1].status == RunStatus::kRejected);
    CHECK(res.summary[2].status == RunStatus::kRejected);
    CHECK(res.summary[1].message.find("k1 > k2 - 1") != std::string::npos);
    CHECK_FALSE(res.runs[1]);
  }
  SUBCASE("grid axes multiply") {
    ParameterGrid grid;
    grid.ic_box = IcBox{};
    grid.ic_box->count = 3;
    grid.harness = HarnessGrid{{0.5, 2.0}, {0.2, 1.0}};
    const auto points = expand_grid(base, grid);
    CHECK(points.size() == 12);
    CHECK(points[0].scenario.feedback.mode == FeedbackMode::kOutputHarness);
    CHECK(points[0].scenario.vessel_initial.units == StateUnits::kNormalized);
    // same seed, same draws
    const auto again = expand_grid(base, grid);
    CHECK(again[5].scenario == points[5].scenario);
  }
  SUBCASE("threads do not change results") {
    ParameterGrid grid;
    grid.ic_box = IcBox{};
    grid.ic_box->count = 4;
    SweepOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const auto points = expand_grid(base, grid);
    const SweepResult a = sweep(points, one);
    const SweepResult b = sweep(points, many);
    for (std::size_t i = 0; i < points.size(); ++i) {
      CHECK(a.summary[i].terminal_error_norm == b.summary[i].terminal_error_norm);
      CHECK(a.summary[i].status == b.summary[i].status);
    }
  }
}
