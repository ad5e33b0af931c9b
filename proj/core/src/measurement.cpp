#include "vdpzeno/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "vdpzeno/errors.hpp"
#include "vdpzeno/parallel.hpp"

namespace vdp {

std::uint64_t MeasurementSchedule::count() const {
  if (!measures() || total_time <= 0.0) return 0;
  // Small slack so that 180 / 10 counts 18 even with rounding in delta_t.
  return static_cast<std::uint64_t>(std::floor(total_time / delta_t + 1e-9));
}

void MeasurementSchedule::validate(double dt) const {
  if (!(delta_t > 0.0)) throw ScheduleError("measurement interval must be positive");
  if (!(total_time >= 0.0)) throw ScheduleError("total time must be non-negative");
  if (measures() && delta_t < dt * (1.0 - 1e-9)) {
    throw ScheduleError("measurement interval " + std::to_string(delta_t) +
                        " is shorter than the integration step " + std::to_string(dt));
  }
}

CollapseRecord heterodyne_collapse(TrajectoryEnsemble& ens, RandomStream& control, unsigned workers) {
  if (ens.empty()) throw StateError("cannot collapse an empty ensemble");
  const std::size_t k = control.uniform_index(ens.size());
  auto states = ens.states();
  const Complex center = states[k];
  const double spread = std::sqrt(0.5);
  parallel_for(ens.size(), workers, [&](std::size_t j) {
    states[j] = center + spread * ens.stream(j).complex_normal();
  });
  return {ens.time(), center, k};
}

MeasuredRun run_measured_evolution(const OscillatorParams& params, const MeasurementSchedule& schedule,
                                   const IntegratorConfig& cfg, const MeasuredRunOptions& options) {
  params.validate();
  cfg.validate(params);
  schedule.validate(cfg.dt);

  const std::uint64_t total = steps_for(schedule.total_time, cfg.dt);
  const std::uint64_t n_meas = schedule.count();
  const std::uint64_t meas_every = schedule.measures() ? std::max<std::uint64_t>(1, steps_for(schedule.delta_t, cfg.dt)) : 0;

  std::set<std::uint64_t> snapshot_steps;
  for (double t : options.snapshot_times) {
    const auto s = steps_for(t, cfg.dt);
    if (s <= total) snapshot_steps.insert(s);
  }

  MeasuredRun run;
  run.final_ensemble = init_coherent(options.init_center, options.n_traj, cfg.seed);
  TrajectoryEnsemble& ens = run.final_ensemble;
  RandomStream control = control_stream(cfg.seed);
  if (options.record_series) run.series.reserve(total / cfg.record_stride + 1);

  auto events_at = [&](std::uint64_t s) {
    if (options.record_series && s % cfg.record_stride == 0) run.series.push_back(ensemble_stats(ens, cfg.workers));
    if (snapshot_steps.contains(s)) {
      const auto st = ens.states();
      run.snapshots.push_back({ens.time(), std::vector<Complex>(st.begin(), st.end())});
    }
    if (meas_every != 0 && s > 0 && s % meas_every == 0 && s / meas_every <= n_meas) {
      run.collapses.push_back(heterodyne_collapse(ens, control, cfg.workers));
    }
  };

  events_at(0);
  std::uint64_t s = 0;
  while (s < total) {
    // Next step carrying any event.
    std::uint64_t next = total;
    if (options.record_series) next = std::min(next, (s / cfg.record_stride + 1) * cfg.record_stride);
    if (meas_every != 0) next = std::min(next, (s / meas_every + 1) * meas_every);
    if (auto it = snapshot_steps.upper_bound(s); it != snapshot_steps.end()) next = std::min(next, *it);
    advance(ens, params, cfg, next - s);
    s = next;
    events_at(s);
  }
  return run;
}

}  // namespace vdp
