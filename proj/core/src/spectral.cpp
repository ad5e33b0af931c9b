#include "vdpzeno/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "vdpzeno/errors.hpp"

namespace vdp::spectral {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::size_t SpectralSeries::nearest_index(double omega) const {
  if (frequencies.empty()) throw StateError("empty spectrum");
  const double pos = std::round(omega / d_omega);
  if (pos <= 0.0) return 0;
  return std::min(frequencies.size() - 1, static_cast<std::size_t>(pos));
}

std::size_t SpectralSeries::argmax(double omega_lo, double omega_hi) const {
  std::size_t best = frequencies.size();
  for (std::size_t m = 0; m < frequencies.size(); ++m) {
    if (frequencies[m] < omega_lo || frequencies[m] > omega_hi) continue;
    if (best == frequencies.size() || magnitudes[m] > magnitudes[best]) best = m;
  }
  if (best == frequencies.size()) throw StateError("no grid frequency inside the requested band");
  return best;
}

SpectralSeries fourier_q(std::span<const double> values, double dt, double omega_max) {
  const std::size_t n = values.size();
  if (n < 2) throw ArgumentError("spectrum needs at least two samples");
  if (!(dt > 0.0)) throw ArgumentError("sampling interval must be positive");

  SpectralSeries out;
  out.d_omega = kTwoPi / (static_cast<double>(n) * dt);
  std::size_t m_max = n / 2;
  if (std::isfinite(omega_max)) {
    m_max = std::min(m_max, static_cast<std::size_t>(std::floor(omega_max / out.d_omega + 1e-9)));
  }

  // exp(-i w_m t_k) = exp(-2 pi i m k / n): one table of n roots, indexed mod n.
  std::vector<std::complex<double>> roots(n);
  for (std::size_t j = 0; j < n; ++j) {
    roots[j] = std::polar(1.0, -kTwoPi * static_cast<double>(j) / static_cast<double>(n));
  }
  const double scale = dt / std::sqrt(kTwoPi);
  out.frequencies.resize(m_max + 1);
  out.magnitudes.resize(m_max + 1);
  for (std::size_t m = 0; m <= m_max; ++m) {
    std::complex<double> acc{};
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += values[k] * roots[idx];
      idx += m;
      if (idx >= n) idx -= n;
    }
    out.frequencies[m] = static_cast<double>(m) * out.d_omega;
    out.magnitudes[m] = std::abs(acc) * scale;
  }
  return out;
}

SpectralSeries fourier_q(std::span<const double> times, std::span<const double> values, double omega_max) {
  if (times.size() != values.size()) throw ArgumentError("times and values differ in length");
  if (times.size() < 2) throw ArgumentError("spectrum needs at least two samples");
  const double dt = times[1] - times[0];
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double step = times[k] - times[k - 1];
    if (std::abs(step - dt) > 1e-9 * std::abs(dt)) throw ArgumentError("series is not uniformly sampled");
  }
  return fourier_q(values, dt, omega_max);
}

SpectralSeries average(std::span<const SpectralSeries> spectra) {
  if (spectra.empty()) throw StateError("average of no spectra");
  SpectralSeries out = spectra.front();
  for (std::size_t s = 1; s < spectra.size(); ++s) {
    if (spectra[s].magnitudes.size() != out.magnitudes.size()) throw ArgumentError("spectra differ in grid");
    for (std::size_t m = 0; m < out.magnitudes.size(); ++m) out.magnitudes[m] += spectra[s].magnitudes[m];
  }
  const double inv = 1.0 / static_cast<double>(spectra.size());
  for (auto& v : out.magnitudes) v *= inv;
  return out;
}

double peak_normalized(const SpectralSeries& series, const OscillatorParams& params) {
  return series.magnitudes[series.nearest_index(params.omega_m)] / limit_cycle_radius(params);
}

CriticalInterval critical_interval(const OscillatorParams& params, double total_time) {
  if (!(params.omega_m > 0.0)) throw DomainError("omega_m must be positive");
  if (!(params.kappa2 >= 0.0) || !(params.kappa1 + 2.0 * params.kappa2 > 0.0)) {
    throw DomainError("threshold needs kappa2 >= 0 and kappa1 + 2 kappa2 > 0");
  }
  CriticalInterval out;
  out.delta_t_c = 3.0 * std::numbers::pi / params.omega_m *
                  std::sqrt(2.0 * params.kappa2 / (params.kappa1 + 2.0 * params.kappa2));
  out.n_c = out.delta_t_c > 0.0 ? total_time / out.delta_t_c : std::numeric_limits<double>::infinity();
  return out;
}

double threshold_ratio(double omega_dt) {
  const double s = std::pow(omega_dt / (3.0 * std::numbers::pi), 2);
  if (!(s > 0.0) || s >= 1.0) throw DomainError("interval outside the invertible range of the threshold");
  return s / (2.0 * (1.0 - s));
}

SpectralSeries ensemble_spectrum(const MeasuredRun& run, double dt_record, double omega_max) {
  std::vector<double> q(run.series.size());
  std::transform(run.series.begin(), run.series.end(), q.begin(), [](const EnsembleStats& s) { return s.mean_q; });
  return fourier_q(q, dt_record, omega_max);
}

std::vector<ZenoSpectrumRow> zeno_spectrum(const OscillatorParams& params, const IntegratorConfig& cfg,
                                           std::size_t n_traj, double total_time, std::span<const std::uint64_t> ns,
                                           double omega_max) {
  const double r = limit_cycle_radius(params);
  std::vector<ZenoSpectrumRow> rows;
  rows.reserve(ns.size());
  for (std::uint64_t n : ns) {
    const auto schedule = n == 0 ? MeasurementSchedule::none(total_time)
                                 : MeasurementSchedule::every(total_time / static_cast<double>(n), total_time);
    MeasuredRunOptions opts;
    opts.n_traj = n_traj;
    opts.init_center = {0.5 * r, 0.0};
    const auto run = run_measured_evolution(params, schedule, cfg, opts);
    // The last record closes the interval; the transform uses [0, t).
    MeasuredRun trimmed;
    trimmed.series.assign(run.series.begin(), run.series.end() - (run.series.size() > 2 ? 1 : 0));
    rows.push_back({n, ensemble_spectrum(trimmed, cfg.dt * static_cast<double>(cfg.record_stride), omega_max)});
  }
  return rows;
}

std::vector<PeakScanPoint> normalized_peak_scan(double omega_m, double kappa1, std::span<const double> ratios,
                                                double delta_t, double total_time, const IntegratorConfig& cfg,
                                                std::size_t repeats) {
  if (repeats < 1) throw ArgumentError("scan needs at least one repetition");
  std::vector<PeakScanPoint> out;
  const double dt_record = cfg.dt * static_cast<double>(cfg.record_stride);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const OscillatorParams params{omega_m, kappa1, ratios[i] * kappa1};
    const double r = limit_cycle_radius(params);
    std::vector<SpectralSeries> spectra;
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      IntegratorConfig run_cfg = cfg;
      run_cfg.seed = mix_seed(cfg.seed ^ (static_cast<std::uint64_t>(i) << 32) ^ rep);
      MeasuredRunOptions opts;
      opts.n_traj = 1;
      opts.init_center = {0.5 * r, 0.0};
      auto run = run_measured_evolution(params, MeasurementSchedule::every(delta_t, total_time), run_cfg, opts);
      if (run.series.size() > 2) run.series.pop_back();
      spectra.push_back(ensemble_spectrum(run, dt_record, 2.0 * omega_m));
    }
    out.push_back({ratios[i], peak_normalized(average(spectra), params)});
  }
  return out;
}

}  // namespace vdp::spectral
