#include "vdpzeno/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vdpzeno/errors.hpp"
#include "vdpzeno/parallel.hpp"

namespace vdp::coupled {

namespace {

constexpr double kPi = std::numbers::pi;

double amplitude_relaxation(const CoupledParams& p, ReductionForm form) {
  return form == ReductionForm::standard ? 2.0 * p.kappa1 + 8.0 * p.kappa2 : 2.0 * p.kappa1 + 4.0 * p.kappa2;
}

}  // namespace

double CoupledParams::equilibrium_amplitude() const {
  if (!(kappa2 > 0.0)) throw DomainError("equilibrium amplitude needs kappa2 > 0");
  return std::sqrt(kappa1 / (2.0 * kappa2) + 1.0);
}

void CoupledParams::validate() const {
  oscillator(1).validate();
  oscillator(2).validate();
  if (!(mu >= 0.0)) throw DomainError("coupling mu must be non-negative");
}

CoupledEnsemble::CoupledEnsemble(std::vector<Complex> a1, std::vector<Complex> a2, std::uint64_t seed)
    : a1_(std::move(a1)), a2_(std::move(a2)) {
  if (a1_.size() != a2_.size()) throw ArgumentError("mode arrays differ in length");
  streams_.reserve(a1_.size());
  for (std::size_t j = 0; j < a1_.size(); ++j) streams_.emplace_back(seed, static_cast<std::uint32_t>(j));
}

std::vector<double> CoupledEnsemble::phase_differences() const {
  std::vector<double> out(size());
  for (std::size_t j = 0; j < size(); ++j) out[j] = wrap_angle(std::arg(a1_[j] * std::conj(a2_[j])));
  return out;
}

CoupledEnsemble init_pairs(const CoupledParams& params, double theta_minus, std::size_t n_traj, std::uint64_t seed) {
  if (n_traj < 1) throw ArgumentError("ensemble needs at least one pair");
  const double i0 = params.equilibrium_amplitude();
  CoupledEnsemble ens(std::vector<Complex>(n_traj, std::polar(i0, theta_minus)), std::vector<Complex>(n_traj, i0),
                      seed);
  const double spread = std::sqrt(0.5);
  for (std::size_t j = 0; j < n_traj; ++j) {
    ens.mode1()[j] += spread * ens.stream(j).complex_normal();
    ens.mode2()[j] += spread * ens.stream(j).complex_normal();
  }
  return ens;
}

void advance(CoupledEnsemble& ens, const CoupledParams& params, const IntegratorConfig& cfg, std::uint64_t n_steps) {
  if (!(cfg.dt > 0.0)) throw ArgumentError("dt must be positive");
  if (n_steps == 0) return;
  const double dt = cfg.dt;
  const OscillatorParams p1 = params.oscillator(1);
  const OscillatorParams p2 = params.oscillator(2);
  const Complex hop(0.0, params.mu);
  const double kick = p1.noise_amplitude() * std::sqrt(dt);
  const bool with_drift = cfg.enable_drift;
  const bool with_noise = cfg.enable_noise;
  const Complex turn1 = std::polar(1.0, -p1.omega_m * dt);
  const Complex turn2 = std::polar(1.0, -p2.omega_m * dt);
  auto m1 = ens.mode1();
  auto m2 = ens.mode2();

  parallel_for(ens.size(), cfg.workers, [&](std::size_t j) {
    Complex a1 = m1[j];
    Complex a2 = m2[j];
    RandomStream& rng = ens.stream(j);
    for (std::uint64_t s = 0; s < n_steps; ++s) {
      Complex n1 = a1, n2 = a2;
      if (with_drift) {
        n1 += (radial_gain(a1, p1) * a1 + hop * a2) * dt;
        n2 += (radial_gain(a2, p2) * a2 + hop * a1) * dt;
      }
      if (with_noise) {
        n1 += kick * rng.complex_normal();
        n2 += kick * rng.complex_normal();
      }
      a1 = with_drift ? turn1 * n1 : n1;
      a2 = with_drift ? turn2 * n2 : n2;
    }
    m1[j] = a1;
    m2[j] = a2;
  });
  ens.set_clock(ens.steps() + n_steps, dt);
}

PolarState to_polar(Complex a1, Complex a2) {
  PolarState s;
  s.i1 = std::abs(a1);
  s.i2 = std::abs(a2);
  s.degenerate = s.i1 == 0.0 || s.i2 == 0.0;
  const double t1 = s.i1 == 0.0 ? 0.0 : wrap_angle(std::arg(a1));
  const double t2 = s.i2 == 0.0 ? 0.0 : wrap_angle(std::arg(a2));
  s.theta_minus = wrap_angle(t1 - t2);
  s.theta_plus = 2.0 * t1 - s.theta_minus;
  return s;
}

std::pair<Complex, Complex> from_polar(const PolarState& s) {
  const double t1 = 0.5 * (s.theta_plus + s.theta_minus);
  const double t2 = 0.5 * (s.theta_plus - s.theta_minus);
  return {std::polar(s.i1, t1), std::polar(s.i2, t2)};
}

double kuramoto_coefficient(const CoupledParams& params, ReductionForm form) {
  const double gamma = amplitude_relaxation(params, form);
  if (!(gamma > 0.0)) throw DomainError("reduction needs positive rates");
  const double two_c = form == ReductionForm::standard ? params.mu * params.mu / gamma
                                                            : 2.0 * params.mu * params.mu / gamma;
  return 0.5 * two_c;
}

std::pair<double, double> stationary_amplitude_shift(const CoupledParams& params, double theta_minus,
                                                     ReductionForm form) {
  const double gamma = amplitude_relaxation(params, form);
  if (!(gamma > 0.0)) throw DomainError("reduction needs positive rates");
  const double shift = params.mu * params.equilibrium_amplitude() * std::sin(theta_minus) / gamma;
  return {shift, -shift};
}

double phase_noise_rate(const CoupledParams& params) {
  const double i0 = params.equilibrium_amplitude();
  return (3.0 * params.kappa1 + 2.0 * params.kappa2) / (i0 * i0);
}

std::vector<double> locked_phases(const CoupledParams& params, ReductionForm form) {
  const double c = kuramoto_coefficient(params, form);
  if (c == 0.0 || std::abs(params.delta_omega) > 2.0 * c) return {};
  const double two_theta = std::asin(-params.delta_omega / (2.0 * c));  // cos > 0 branch
  return {wrap_angle(0.5 * two_theta), wrap_angle(0.5 * two_theta + kPi)};
}

double reduced_phase_step(double theta_minus, const CoupledParams& params, double dt, RandomStream* noise,
                          ReductionForm form) {
  const double c = kuramoto_coefficient(params, form);
  double next = theta_minus + (-params.delta_omega - 2.0 * c * std::sin(2.0 * theta_minus)) * dt;
  if (noise != nullptr) {
    const double gauss = std::numbers::sqrt2 * noise->complex_normal().real();
    next += std::sqrt(phase_noise_rate(params) * dt) * gauss;
  }
  return next;
}

JointCollapseRecord joint_heterodyne_collapse(CoupledEnsemble& ens, RandomStream& control, unsigned workers) {
  if (ens.empty()) throw StateError("cannot collapse an empty ensemble");
  const std::size_t k = control.uniform_index(ens.size());
  auto m1 = ens.mode1();
  auto m2 = ens.mode2();
  const Complex c1 = m1[k];
  const Complex c2 = m2[k];
  const double spread = std::sqrt(0.5);
  parallel_for(ens.size(), workers, [&](std::size_t j) {
    RandomStream& rng = ens.stream(j);
    m1[j] = c1 + spread * rng.complex_normal();
    m2[j] = c2 + spread * rng.complex_normal();
  });
  return {ens.time(), k, c1, c2};
}

CoupledRun run_coupled(const CoupledParams& params, const MeasurementSchedule& schedule, const IntegratorConfig& cfg,
                       const CoupledRunOptions& options) {
  params.validate();
  cfg.validate(params.oscillator(1));
  schedule.validate(cfg.dt);
  if (options.sample_stride == 0) throw ArgumentError("sample_stride must be at least 1");

  const std::uint64_t total = steps_for(schedule.total_time, cfg.dt);
  const std::uint64_t n_meas = schedule.count();
  const std::uint64_t meas_every =
      schedule.measures() ? std::max<std::uint64_t>(1, steps_for(schedule.delta_t, cfg.dt)) : 0;
  const std::uint64_t stride = options.sample_stride;

  CoupledRun run;
  run.final_ensemble = init_pairs(params, options.theta_minus0, options.n_traj, cfg.seed);
  CoupledEnsemble& ens = run.final_ensemble;
  RandomStream control = control_stream(cfg.seed);

  auto events_at = [&](std::uint64_t s) {
    if (s % stride == 0) {
      const auto diffs = ens.phase_differences();
      run.times.push_back(ens.time());
      run.distributions.push_back(phase_distribution(std::span<const double>(diffs), options.n_bins));
    }
    if (meas_every != 0 && s > 0 && s % meas_every == 0 && s / meas_every <= n_meas) {
      run.collapses.push_back(joint_heterodyne_collapse(ens, control, cfg.workers));
    }
  };

  events_at(0);
  std::uint64_t s = 0;
  while (s < total) {
    std::uint64_t next = std::min(total, (s / stride + 1) * stride);
    if (meas_every != 0) next = std::min(next, (s / meas_every + 1) * meas_every);
    advance(ens, params, cfg, next - s);
    s = next;
    events_at(s);
  }
  return run;
}

double sync_degree(std::span<const PhaseDistribution> series) {
  if (series.empty()) throw ArgumentError("synchronization degree of an empty series");
  double acc = 0.0;
  for (const auto& d : series) acc += std::max(d.at(0.0), d.at(kPi));
  return acc / static_cast<double>(series.size());
}

SyncResult sync_measure(std::span<const std::vector<PhaseDistribution>> repetitions, std::optional<double> baseline) {
  if (repetitions.empty()) throw ArgumentError("synchronization measure needs at least one repetition");
  SyncResult out;
  for (const auto& rep : repetitions) out.per_repetition.push_back(sync_degree(rep));
  const double m = static_cast<double>(out.per_repetition.size());
  for (double s : out.per_repetition) out.mean += s;
  out.mean /= m;
  if (out.per_repetition.size() > 1) {
    double var = 0.0;
    for (double s : out.per_repetition) var += (s - out.mean) * (s - out.mean);
    out.sigma = std::sqrt(var / (m - 1.0));
  }
  if (baseline && *baseline > 0.0) {
    out.baseline = baseline;
    out.ratio = out.mean / *baseline;
    out.ratio_sigma = out.sigma / *baseline;
  }
  return out;
}

double stationary_baseline(const CoupledRun& unmeasured, double t_start) {
  double acc = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < unmeasured.times.size(); ++i) {
    if (unmeasured.times[i] < t_start) continue;
    const auto& d = unmeasured.distributions[i];
    acc += 0.5 * (d.at(0.0) + d.at(kPi));
    ++used;
  }
  if (used == 0) throw StateError("no samples in the stationary window");
  return acc / static_cast<double>(used);
}

}  // namespace vdp::coupled
