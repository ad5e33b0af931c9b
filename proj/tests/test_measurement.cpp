#include <doctest.h>

#include <cmath>

#include "vdpzeno/errors.hpp"
#include "vdpzeno/measurement.hpp"
#include "vdpzeno/phase_space.hpp"

using namespace vdp;

namespace {

double q_variance(std::span<const Complex> states) {
  double m = 0;
  for (auto a : states) m += 2 * a.real();
  m /= static_cast<double>(states.size());
  double v = 0;
  for (auto a : states) v += std::pow(2 * a.real() - m, 2);
  return v / static_cast<double>(states.size());
}

}  // namespace

TEST_CASE("schedule counts and validation") {
  CHECK(MeasurementSchedule::every(10.0, 180.0).count() == 18);
  CHECK(MeasurementSchedule::every(0.1, 180.0).count() == 1800);
  CHECK(MeasurementSchedule::none(180.0).count() == 0);
  CHECK_FALSE(MeasurementSchedule::none(180.0).measures());
  CHECK_THROWS_AS(MeasurementSchedule::every(0.001, 1.0).validate(0.005), ScheduleError);
  CHECK_THROWS_AS(MeasurementSchedule::every(0.0, 1.0).validate(0.005), ScheduleError);
  CHECK_THROWS_AS(MeasurementSchedule::every(-1.0, 1.0).validate(0.005), ScheduleError);
  CHECK_NOTHROW(MeasurementSchedule::every(0.005, 1.0).validate(0.005));
  CHECK_NOTHROW(MeasurementSchedule::none(1.0).validate(0.005));
}

TEST_CASE("collapse of identical states is a coherent cloud") {
  const Complex a0{2.0, -1.5};
  TrajectoryEnsemble ens(std::vector<Complex>(200000, a0), 4);
  auto control = control_stream(4);
  const auto rec = heterodyne_collapse(ens, control);
  CHECK(rec.sampled_center == a0);
  CHECK(rec.sampled_index < ens.size());
  double m2 = 0;
  for (auto a : ens.states()) m2 += std::norm(a - a0);
  CHECK(m2 / ens.size() == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("collapse resets the quadrature variance") {
  // A phase-diffused ring, then a collapse.
  std::vector<Complex> ring(1000000);
  for (std::size_t j = 0; j < ring.size(); ++j) ring[j] = std::polar(3.3, 0.001 * static_cast<double>(j));
  TrajectoryEnsemble ens(std::move(ring), 21);
  ens.set_clock(2000, 0.005);
  CHECK(q_variance(ens.states()) > 1.5);
  auto control = control_stream(21);
  const auto rec = heterodyne_collapse(ens, control);
  CHECK(ens.size() == 1000000);
  CHECK(q_variance(ens.states()) == doctest::Approx(1.0).epsilon(0.005));
  CHECK(rec.time == doctest::Approx(10.0));
  TrajectoryEnsemble empty;
  CHECK_THROWS_AS(heterodyne_collapse(empty, control), StateError);
}

TEST_CASE("sampled indices depend only on seed and schedule") {
  const OscillatorParams p;
  IntegratorConfig cfg;
  cfg.seed = 99;
  MeasuredRunOptions opts;
  opts.n_traj = 300;
  opts.init_center = {3.3, 0.0};
  const auto schedule = MeasurementSchedule::every(0.5, 5.0);
  const auto a = run_measured_evolution(p, schedule, cfg, opts);
  cfg.workers = 4;
  const auto b = run_measured_evolution(p, schedule, cfg, opts);
  REQUIRE(a.collapses.size() == 10);
  REQUIRE(b.collapses.size() == 10);
  for (std::size_t i = 0; i < a.collapses.size(); ++i) {
    CHECK(a.collapses[i].sampled_index == b.collapses[i].sampled_index);
    CHECK(a.collapses[i].sampled_center == b.collapses[i].sampled_center);
    CHECK(a.collapses[i].time == doctest::Approx(0.5 * (i + 1)));
  }
  CHECK(std::equal(a.final_ensemble.states().begin(), a.final_ensemble.states().end(),
                   b.final_ensemble.states().begin()));
}

TEST_CASE("no measurements reduces to plain evolution") {
  const OscillatorParams p;
  IntegratorConfig cfg;
  cfg.seed = 5;
  MeasuredRunOptions opts;
  opts.n_traj = 64;
  opts.init_center = {1.0, 1.0};
  const auto run = run_measured_evolution(p, MeasurementSchedule::none(3.0), cfg, opts);
  auto ens = init_coherent(opts.init_center, opts.n_traj, cfg.seed);
  const auto series = evolve(ens, p, cfg, 3.0);
  REQUIRE(run.series.size() == series.size());
  CHECK(run.collapses.empty());
  for (std::size_t i = 0; i < series.size(); ++i) CHECK(run.series[i].mean_amp == series[i].mean_amp);
  CHECK(std::equal(ens.states().begin(), ens.states().end(), run.final_ensemble.states().begin()));
}

TEST_CASE("snapshots are taken before a coinciding collapse") {
  const OscillatorParams p;
  IntegratorConfig cfg;
  MeasuredRunOptions opts;
  opts.n_traj = 2000;
  opts.init_center = {3.3, 0.0};
  opts.snapshot_times = {0.0, 3.0, 4.0};
  const auto run = run_measured_evolution(p, MeasurementSchedule::every(2.0, 4.0), cfg, opts);
  REQUIRE(run.snapshots.size() == 3);
  CHECK(run.snapshots[1].time == doctest::Approx(3.0));
  CHECK(run.snapshots[2].time == doctest::Approx(4.0));
  REQUIRE(run.collapses.size() == 2);
  // The last collapse replaced every state, so the t = 4 snapshot differs from the final ensemble.
  CHECK(run.snapshots[2].states[0] != run.final_ensemble.states()[0]);
  CHECK(run.series.back().time == doctest::Approx(4.0));
}

TEST_CASE("single trajectory keeps oscillating under collapses") {
  const OscillatorParams p;
  IntegratorConfig cfg;
  MeasuredRunOptions opts;
  opts.n_traj = 1;
  opts.init_center = {3.3, 0.0};
  const auto run = run_measured_evolution(p, MeasurementSchedule::every(1.0, 20.0), cfg, opts);
  double lo = 1e9, hi = -1e9;
  for (const auto& s : run.series) {
    lo = std::min(lo, s.mean_q);
    hi = std::max(hi, s.mean_q);
  }
  CHECK(lo < -4.0);
  CHECK(hi > 4.0);
}

TEST_CASE("frequent collapses keep the phase localized") {
  const OscillatorParams p;
  IntegratorConfig cfg;
  MeasuredRunOptions opts;
  opts.n_traj = 2000;
  opts.init_center = {limit_cycle_radius(p) / 2, 0.0};
  opts.snapshot_times = {60.0};
  opts.record_series = false;
  const auto free_run = run_measured_evolution(p, MeasurementSchedule::none(60.0), cfg, opts);
  const auto measured = run_measured_evolution(p, MeasurementSchedule::every(1.0, 60.0), cfg, opts);
  const auto spread_free = circular_spread(phase_distribution(std::span<const Complex>(free_run.snapshots[0].states), 64));
  const auto spread_meas = circular_spread(phase_distribution(std::span<const Complex>(measured.snapshots[0].states), 64));
  CHECK(spread_meas < 0.3);
  CHECK(spread_meas < spread_free);
}
