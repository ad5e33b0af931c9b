#include "vdpzeno/oscillator.hpp"

#include <cmath>
#include <string>

#include "vdpzeno/errors.hpp"
#include "vdpzeno/parallel.hpp"

namespace vdp {

namespace {

constexpr double kMaxOmegaDt = 0.05;
const double kCoherentSpread = std::sqrt(0.5);

struct StatsAccumulator {
  Complex sum{};
  double radius_sum = 0.0;
  StatsAccumulator& operator+=(const StatsAccumulator& o) {
    sum += o.sum;
    radius_sum += o.radius_sum;
    return *this;
  }
};

}  // namespace

void OscillatorParams::validate() const {
  if (!(omega_m > 0.0)) throw DomainError("omega_m must be positive");
  if (!(kappa1 >= 0.0)) throw DomainError("kappa1 must be non-negative");
  if (!(kappa2 > 0.0)) throw DomainError("kappa2 must be positive");
}

double OscillatorParams::noise_amplitude() const noexcept {
  return std::sqrt(3.0 * kappa1 + 2.0 * kappa2);
}

void IntegratorConfig::validate(const OscillatorParams& params) const {
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  if (record_stride == 0) throw ArgumentError("record_stride must be at least 1");
  if (params.omega_m * dt > kMaxOmegaDt + 1e-12) {
    throw ArgumentError("omega_m * dt = " + std::to_string(params.omega_m * dt) +
                        " exceeds the accuracy guard 0.05");
  }
}

TrajectoryEnsemble::TrajectoryEnsemble(std::vector<Complex> states, std::uint64_t seed)
    : states_(std::move(states)) {
  streams_.reserve(states_.size());
  for (std::size_t j = 0; j < states_.size(); ++j) {
    streams_.emplace_back(seed, static_cast<std::uint32_t>(j));
  }
}

double limit_cycle_radius(const OscillatorParams& params) {
  if (!(params.kappa2 > 0.0)) throw DomainError("limit cycle radius needs kappa2 > 0");
  return 2.0 * std::sqrt(params.kappa1 / (2.0 * params.kappa2) + 1.0);
}

TrajectoryEnsemble init_coherent(Complex center, std::size_t n_traj, std::uint64_t seed) {
  if (n_traj < 1) throw ArgumentError("ensemble needs at least one trajectory");
  TrajectoryEnsemble ens(std::vector<Complex>(n_traj, center), seed);
  auto states = ens.states();
  for (std::size_t j = 0; j < n_traj; ++j) {
    states[j] += kCoherentSpread * ens.stream(j).complex_normal();
  }
  return ens;
}

void advance(TrajectoryEnsemble& ens, const OscillatorParams& params, const IntegratorConfig& cfg,
             std::uint64_t n_steps) {
  if (!(cfg.dt > 0.0)) throw ArgumentError("dt must be positive");
  if (n_steps == 0) return;
  const double dt = cfg.dt;
  const double kick = params.noise_amplitude() * std::sqrt(dt);
  const bool with_drift = cfg.enable_drift;
  const bool with_noise = cfg.enable_noise;
  const Complex turn = std::polar(1.0, -params.omega_m * dt);
  auto states = ens.states();

  parallel_for(ens.size(), cfg.workers, [&](std::size_t j) {
    Complex a = states[j];
    RandomStream& rng = ens.stream(j);
    for (std::uint64_t s = 0; s < n_steps; ++s) {
      Complex next = a;
      if (with_drift) next += radial_gain(a, params) * dt * a;
      if (with_noise) next += kick * rng.complex_normal();
      a = with_drift ? turn * next : next;
    }
    states[j] = a;
  });
  ens.set_clock(ens.steps() + n_steps, dt);
}

void step(TrajectoryEnsemble& ens, const OscillatorParams& params, const IntegratorConfig& cfg) {
  advance(ens, params, cfg, 1);
}

EnsembleStats ensemble_stats(const TrajectoryEnsemble& ens, unsigned workers) {
  EnsembleStats stats;
  stats.time = ens.time();
  const std::size_t n = ens.size();
  if (n == 0) return stats;
  const auto states = ens.states();

  const auto first = ordered_reduce(n, workers, StatsAccumulator{},
                                    [&](std::size_t begin, std::size_t end) {
                                      StatsAccumulator acc;
                                      for (std::size_t j = begin; j < end; ++j) {
                                        acc.sum += states[j];
                                        acc.radius_sum += std::abs(states[j]);
                                      }
                                      return acc;
                                    });
  const double inv_n = 1.0 / static_cast<double>(n);
  stats.mean_amp = first.sum * inv_n;
  stats.mean_radius = first.radius_sum * inv_n;

  const Complex mean = stats.mean_amp;
  const Complex second = ordered_reduce(n, workers, Complex{},
                                        [&](std::size_t begin, std::size_t end) {
                                          Complex acc{};
                                          for (std::size_t j = begin; j < end; ++j) {
                                            const Complex d = states[j] - mean;
                                            acc += d * d;
                                          }
                                          return acc;
                                        });
  stats.var_amp = second * inv_n;
  stats.mean_q = 2.0 * stats.mean_amp.real();
  stats.mean_p = 2.0 * stats.mean_amp.imag();
  return stats;
}

std::uint64_t steps_for(double duration, double dt) {
  if (!(duration >= 0.0)) throw ArgumentError("duration must be non-negative");
  return static_cast<std::uint64_t>(std::llround(duration / dt));
}

std::vector<EnsembleStats> evolve(TrajectoryEnsemble& ens, const OscillatorParams& params,
                                  const IntegratorConfig& cfg, double duration) {
  cfg.validate(params);
  const std::uint64_t total = steps_for(duration, cfg.dt);
  std::vector<EnsembleStats> series;
  series.reserve(total / cfg.record_stride + 1);
  series.push_back(ensemble_stats(ens, cfg.workers));
  std::uint64_t done = 0;
  while (done < total) {
    const std::uint64_t chunk = std::min<std::uint64_t>(cfg.record_stride, total - done);
    advance(ens, params, cfg, chunk);
    done += chunk;
    if (chunk == cfg.record_stride) series.push_back(ensemble_stats(ens, cfg.workers));
  }
  return series;
}

}  // namespace vdp
