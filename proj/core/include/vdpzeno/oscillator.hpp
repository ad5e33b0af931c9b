#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vdpzeno/rng.hpp"

namespace vdp {

using Complex = std::complex<double>;

/// Rates of a single van der Pol oscillator, all in units of omega_m.
struct OscillatorParams {
  double omega_m = 1.0;
  double kappa1 = 0.1;    // linear gain
  double kappa2 = 0.005;  // two-excitation loss

  /// Throws DomainError unless omega_m > 0, kappa1 >= 0, kappa2 > 0.
  void validate() const;

  /// Amplitude of the additive noise, sqrt(3 kappa1 + 2 kappa2).
  [[nodiscard]] double noise_amplitude() const noexcept;
};

struct IntegratorConfig {
  double dt = 0.005;
  std::size_t record_stride = 10;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  // Test hooks: switch off either half of the Langevin equation.
  bool enable_drift = true;
  bool enable_noise = true;

  /// Throws ArgumentError for dt <= 0, record_stride == 0 or omega_m * dt > 0.05.
  void validate(const OscillatorParams& params) const;
};

/// Cross-trajectory moments at one instant.
///
/// Quadratures follow Q = a + a*, P = i(a* - a), i.e. Q = 2 Re a and P = 2 Im a.
struct EnsembleStats {
  double time = 0.0;
  Complex mean_amp{};
  Complex var_amp{};  // sum_j (a_j - <a>)^2 / N, complex, not |.|^2
  double mean_q = 0.0;
  double mean_p = 0.0;
  double mean_radius = 0.0;  // <|a_j|>
};

/// N phase-space amplitudes, each with its own random stream.
class TrajectoryEnsemble {
 public:
  TrajectoryEnsemble() = default;
  TrajectoryEnsemble(std::vector<Complex> states, std::uint64_t seed);

  [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
  [[nodiscard]] bool empty() const noexcept { return states_.empty(); }

  [[nodiscard]] std::span<const Complex> states() const noexcept { return states_; }
  [[nodiscard]] std::span<Complex> states() noexcept { return states_; }

  [[nodiscard]] RandomStream& stream(std::size_t j) noexcept { return streams_[j]; }
  [[nodiscard]] const RandomStream& stream(std::size_t j) const noexcept { return streams_[j]; }

  [[nodiscard]] std::uint64_t steps() const noexcept { return steps_; }
  [[nodiscard]] double time() const noexcept { return time_; }
  void set_clock(std::uint64_t steps, double dt) noexcept {
    steps_ = steps;
    time_ = static_cast<double>(steps) * dt;
  }

 private:
  std::vector<Complex> states_;
  std::vector<RandomStream> streams_;
  std::uint64_t steps_ = 0;
  double time_ = 0.0;
};

/// Diameter of the classical limit cycle in the Q-P plane, 2 sqrt(kappa1/(2 kappa2) + 1).
double limit_cycle_radius(const OscillatorParams& params);

/// Net radial rate kappa1 - 2 kappa2 (|a|^2 - 1); zero on the limit cycle.
inline double radial_gain(Complex alpha, const OscillatorParams& p) noexcept {
  return p.kappa1 - 2.0 * p.kappa2 * (std::norm(alpha) - 1.0);
}

/// Deterministic part of the Langevin equation.
inline Complex drift(Complex alpha, const OscillatorParams& p) noexcept {
  return Complex{radial_gain(alpha, p), -p.omega_m} * alpha;
}

/// Samples alpha_j = center + Z_j with E|Z|^2 = 0.5 (a coherent state's Wigner cloud).
TrajectoryEnsemble init_coherent(Complex center, std::size_t n_traj, std::uint64_t seed);

/// One step for every trajectory: Euler-Maruyama for gain, loss and noise,
/// followed by the exact free rotation exp(-i omega_m dt). Plain Euler on the
/// rotation would inflate the radius by a factor 1 + omega_m^2 dt / 2 per unit
/// time; the split keeps the limit cycle exact.
void step(TrajectoryEnsemble& ens, const OscillatorParams& params, const IntegratorConfig& cfg);

/// `n_steps` Euler-Maruyama steps per trajectory, trajectories in parallel.
void advance(TrajectoryEnsemble& ens, const OscillatorParams& params, const IntegratorConfig& cfg,
             std::uint64_t n_steps);

EnsembleStats ensemble_stats(const TrajectoryEnsemble& ens, unsigned workers = 1);

/// Advances for `duration` (rounded to whole steps) and returns the stats
/// recorded at the start and after every `record_stride` steps.
std::vector<EnsembleStats> evolve(TrajectoryEnsemble& ens, const OscillatorParams& params,
                                  const IntegratorConfig& cfg, double duration);

/// Number of integration steps closest to `duration`.
std::uint64_t steps_for(double duration, double dt);

}  // namespace vdp
