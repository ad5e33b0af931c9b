#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vdpzeno/measurement.hpp"
#include "vdpzeno/oscillator.hpp"
#include "vdpzeno/phase_space.hpp"
#include "vdpzeno/rng.hpp"

namespace vdp::coupled {

/// Two oscillators sharing kappa1, kappa2 with hopping rate mu.
struct CoupledParams {
  double omega_m1 = 1.0;
  double delta_omega = 0.01;  // omega_m1 - omega_m2
  double kappa1 = 0.1;
  double kappa2 = 0.005;
  double mu = 0.02;

  [[nodiscard]] double omega_m2() const noexcept { return omega_m1 - delta_omega; }
  [[nodiscard]] OscillatorParams oscillator(int j) const noexcept {
    return {j == 1 ? omega_m1 : omega_m2(), kappa1, kappa2};
  }
  /// Uncoupled limit-cycle amplitude I0 = sqrt(kappa1/(2 kappa2) + 1).
  [[nodiscard]] double equilibrium_amplitude() const;
  void validate() const;
};

/// N amplitude pairs, one random stream per pair (two draws per step).
class CoupledEnsemble {
 public:
  CoupledEnsemble() = default;
  CoupledEnsemble(std::vector<Complex> a1, std::vector<Complex> a2, std::uint64_t seed);

  [[nodiscard]] std::size_t size() const noexcept { return a1_.size(); }
  [[nodiscard]] bool empty() const noexcept { return a1_.empty(); }
  [[nodiscard]] std::span<Complex> mode1() noexcept { return a1_; }
  [[nodiscard]] std::span<Complex> mode2() noexcept { return a2_; }
  [[nodiscard]] std::span<const Complex> mode1() const noexcept { return a1_; }
  [[nodiscard]] std::span<const Complex> mode2() const noexcept { return a2_; }
  [[nodiscard]] RandomStream& stream(std::size_t j) noexcept { return streams_[j]; }

  [[nodiscard]] std::uint64_t steps() const noexcept { return steps_; }
  [[nodiscard]] double time() const noexcept { return time_; }
  void set_clock(std::uint64_t steps, double dt) noexcept {
    steps_ = steps;
    time_ = static_cast<double>(steps) * dt;
  }

  /// Phase difference arg(a1) - arg(a2) of every pair, wrapped to [0, 2pi).
  [[nodiscard]] std::vector<double> phase_differences() const;

 private:
  std::vector<Complex> a1_, a2_;
  std::vector<RandomStream> streams_;
  std::uint64_t steps_ = 0;
  double time_ = 0.0;
};

/// Pairs start at (I0 e^{i theta_minus}, I0) plus independent coherent noise.
CoupledEnsemble init_pairs(const CoupledParams& params, double theta_minus, std::size_t n_traj, std::uint64_t seed);

/// `n_steps` steps of the split scheme used for single oscillators (exact free
/// rotation per mode); the two modes get uncorrelated noise.
void advance(CoupledEnsemble& ens, const CoupledParams& params, const IntegratorConfig& cfg, std::uint64_t n_steps);
inline void coupled_step(CoupledEnsemble& ens, const CoupledParams& params, const IntegratorConfig& cfg) {
  advance(ens, params, cfg, 1);
}

/// alpha_j = I_j e^{i theta_j}. theta_minus is wrapped to [0, 2pi); theta_plus
/// is carried as 2 theta_1 - theta_minus (theta_1 in [0, 2pi)) so that the pair
/// can be rebuilt exactly.
struct PolarState {
  double i1 = 0.0;
  double i2 = 0.0;
  double theta_plus = 0.0;
  double theta_minus = 0.0;
  bool degenerate = false;  // a zero amplitude; its phase was set to 0
};

PolarState to_polar(Complex a1, Complex a2);
std::pair<Complex, Complex> from_polar(const PolarState& s);

/// Which closed form to use for the adiabatic amplitude elimination.
/// `standard` uses the denominator 2 kappa1 + 8 kappa2 and
/// 2c = mu^2 / (2 kappa1 + 8 kappa2). `from_langevin` re-derives both from the
/// coupled Langevin equations: denominator 2 kappa1 + 4 kappa2 and
/// 2c = 2 mu^2 / (2 kappa1 + 4 kappa2).
enum class ReductionForm { standard, from_langevin };

/// Washboard coefficient c of d theta_-/dt = -delta_omega - 2c sin 2 theta_-.
double kuramoto_coefficient(const CoupledParams& params, ReductionForm form = ReductionForm::standard);

/// Stationary amplitude perturbations (delta I1, delta I2) at a given phase difference.
std::pair<double, double> stationary_amplitude_shift(const CoupledParams& params, double theta_minus,
                                                     ReductionForm form = ReductionForm::standard);

/// Variance rate of the phase-difference noise at I_j = I0:
/// (3 kappa1 + 2 kappa2) / I0^2 (each mode contributes half).
double phase_noise_rate(const CoupledParams& params);

/// Stable locked phases (sin 2 theta = -delta_omega / 2c, cos 2 theta > 0) in [0, 2pi),
/// empty if |delta_omega| > 2c.
std::vector<double> locked_phases(const CoupledParams& params, ReductionForm form = ReductionForm::standard);

/// One Euler(-Maruyama) step of the reduced phase equation. With `noise`
/// null the step is deterministic. The result is not wrapped.
double reduced_phase_step(double theta_minus, const CoupledParams& params, double dt, RandomStream* noise = nullptr,
                          ReductionForm form = ReductionForm::standard);

struct JointCollapseRecord {
  double time = 0.0;
  std::size_t sampled_index = 0;
  Complex center1{}, center2{};
};

/// Draws one pair index k; every pair restarts at (a1_k + Z1_j, a2_k + Z2_j).
JointCollapseRecord joint_heterodyne_collapse(CoupledEnsemble& ens, RandomStream& control, unsigned workers = 1);

struct CoupledRunOptions {
  std::size_t n_traj = 50000;
  double theta_minus0 = 1.5707963267948966;  // pi/2
  std::size_t n_bins = 64;
  std::size_t sample_stride = 100;  // steps between phase-difference samples
};

struct CoupledRun {
  std::vector<double> times;
  std::vector<PhaseDistribution> distributions;  // theta_- density at each time
  std::vector<JointCollapseRecord> collapses;
  CoupledEnsemble final_ensemble;
};

/// Evolves pairs from theta_minus0 under the schedule and samples the
/// phase-difference distribution every sample_stride steps (before any
/// collapse that falls on the same step).
CoupledRun run_coupled(const CoupledParams& params, const MeasurementSchedule& schedule, const IntegratorConfig& cfg,
                       const CoupledRunOptions& options);

struct SyncResult {
  std::vector<double> per_repetition;  // S_i
  double mean = 0.0;                   // S
  double sigma = 0.0;                  // sample std of S_i
  std::optional<double> baseline;      // S_l
  std::optional<double> ratio;         // S / S_l
  std::optional<double> ratio_sigma;   // sigma / S_l
};

/// Time average of max(W(0), W(pi)) over one uniformly sampled run.
double sync_degree(std::span<const PhaseDistribution> series);

/// Means over repetitions; normalized by `baseline` when one is given.
/// Throws ArgumentError when no repetition is supplied.
SyncResult sync_measure(std::span<const std::vector<PhaseDistribution>> repetitions,
                        std::optional<double> baseline = std::nullopt);

/// Common stationary value of W(0) and W(pi) without measurements: the
/// average of (W(0) + W(pi))/2 over samples with time >= t_start.
double stationary_baseline(const CoupledRun& unmeasured, double t_start);

}  // namespace vdp::coupled
