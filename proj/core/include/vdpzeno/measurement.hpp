#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "vdpzeno/oscillator.hpp"

namespace vdp {

/// Evenly spaced measurements: n = floor(total_time / delta_t) collapses at
/// k * delta_t, k = 1..n. An infinite delta_t means no measurement.
struct MeasurementSchedule {
  double delta_t = std::numeric_limits<double>::infinity();
  double total_time = 0.0;

  [[nodiscard]] bool measures() const noexcept { return delta_t < std::numeric_limits<double>::infinity(); }
  [[nodiscard]] std::uint64_t count() const;

  /// Throws ScheduleError when delta_t <= 0 or delta_t < dt (a sub-step measurement).
  void validate(double dt) const;

  static MeasurementSchedule none(double total_time) { return {std::numeric_limits<double>::infinity(), total_time}; }
  static MeasurementSchedule every(double delta_t, double total_time) { return {delta_t, total_time}; }
};

struct CollapseRecord {
  double time = 0.0;
  Complex sampled_center{};
  std::size_t sampled_index = 0;
};

/// Ideal heterodyne measurement on the trajectory cloud: one member alpha_k is
/// drawn uniformly from `control`, then every trajectory restarts at
/// alpha_k + Z_j with its own Z_j (E|Z|^2 = 0.5).
CollapseRecord heterodyne_collapse(TrajectoryEnsemble& ens, RandomStream& control, unsigned workers = 1);

struct EnsembleSnapshot {
  double time = 0.0;
  std::vector<Complex> states;
};

struct MeasuredRun {
  std::vector<EnsembleStats> series;
  std::vector<CollapseRecord> collapses;
  std::vector<EnsembleSnapshot> snapshots;
  TrajectoryEnsemble final_ensemble;
};

struct MeasuredRunOptions {
  std::size_t n_traj = 50000;
  Complex init_center{};
  std::vector<double> snapshot_times;  // rounded to the nearest step
  bool record_series = true;
};

/// Alternates free evolution and heterodyne collapses. Stats and snapshots
/// falling on a measurement instant are taken just before that collapse.
MeasuredRun run_measured_evolution(const OscillatorParams& params, const MeasurementSchedule& schedule,
                                   const IntegratorConfig& cfg, const MeasuredRunOptions& options);

/// Control stream used for collapse indices of a run with the given seed.
inline RandomStream control_stream(std::uint64_t seed) { return RandomStream(seed, 0, StreamDomain::control); }

}  // namespace vdp
