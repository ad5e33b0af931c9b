#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "vdpzeno/measurement.hpp"
#include "vdpzeno/oscillator.hpp"

namespace vdp::spectral {

/// |(1/sqrt(2 pi)) sum_k Q(t_k) exp(-i w t_k) dt| on the grid w_m = m * 2pi / t,
/// where t = N dt is the record length.
struct SpectralSeries {
  double d_omega = 0.0;
  std::vector<double> frequencies;
  std::vector<double> magnitudes;

  [[nodiscard]] std::size_t nearest_index(double omega) const;
  [[nodiscard]] std::size_t argmax(double omega_lo = 0.0,
                                   double omega_hi = std::numeric_limits<double>::infinity()) const;
};

/// Direct rectangle-rule transform of a uniformly sampled series, no window,
/// no zero padding. The grid covers [0, min(pi/dt, omega_max)].
/// Throws ArgumentError for fewer than 2 samples or dt <= 0.
SpectralSeries fourier_q(std::span<const double> values, double dt,
                         double omega_max = std::numeric_limits<double>::infinity());

/// Same, for explicitly timed samples; throws ArgumentError unless the times
/// are uniformly spaced (relative tolerance 1e-9).
SpectralSeries fourier_q(std::span<const double> times, std::span<const double> values,
                         double omega_max = std::numeric_limits<double>::infinity());

/// Pointwise mean of spectra sharing one grid.
SpectralSeries average(std::span<const SpectralSeries> spectra);

/// Magnitude at the grid frequency nearest omega_m, divided by the limit cycle radius.
double peak_normalized(const SpectralSeries& series, const OscillatorParams& params);

struct CriticalInterval {
  double delta_t_c = 0.0;
  double n_c = 0.0;
};

/// delta_t_c = (3 pi / omega_m) sqrt(2 kappa2 / (kappa1 + 2 kappa2)) and n_c = t / delta_t_c.
/// Throws DomainError when omega_m <= 0, kappa2 < 0 or kappa1 + 2 kappa2 <= 0.
CriticalInterval critical_interval(const OscillatorParams& params, double total_time);

/// kappa2/kappa1 at which the threshold interval equals `omega_dt` (inverse of critical_interval).
double threshold_ratio(double omega_dt);

/// Mean-coordinate spectrum of one measured run: <Q>(t) recorded every
/// record_stride steps, transformed up to omega_max.
SpectralSeries ensemble_spectrum(const MeasuredRun& run, double dt_record, double omega_max);

struct ZenoSpectrumRow {
  std::uint64_t n = 0;  // measurements in total_time (0 = none)
  SpectralSeries spectrum;
};

/// Spectra of the ensemble mean for each measurement count in `ns`
/// (delta_t = total_time / n), all from the same seed.
std::vector<ZenoSpectrumRow> zeno_spectrum(const OscillatorParams& params, const IntegratorConfig& cfg,
                                           std::size_t n_traj, double total_time, std::span<const std::uint64_t> ns,
                                           double omega_max);

struct PeakScanPoint {
  double ratio = 0.0;  // kappa2 / kappa1
  double peak = 0.0;   // Q(omega_m) / r
};

/// Normalized peak versus kappa2/kappa1 at fixed kappa1 and measurement
/// interval. Each point averages the spectra of `repeats` single-trajectory
/// runs (seeds derived from cfg.seed).
std::vector<PeakScanPoint> normalized_peak_scan(double omega_m, double kappa1, std::span<const double> ratios,
                                                double delta_t, double total_time, const IntegratorConfig& cfg,
                                                std::size_t repeats);

}  // namespace vdp::spectral
