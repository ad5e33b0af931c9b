#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vdpzeno/oscillator.hpp"
#include "vdpzeno/rng.hpp"

namespace vdp::fock {

using Matrix = Eigen::MatrixXcd;

/// Truncated Fock-space density matrix.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Matrix rho) : rho_(std::move(rho)) {}

  static DensityMatrix vacuum(std::size_t dim);
  static DensityMatrix number_state(std::size_t dim, std::size_t n);
  /// |alpha><alpha| built as D(alpha)|0>.
  static DensityMatrix coherent(std::size_t dim, std::complex<double> alpha);

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return rho_; }
  [[nodiscard]] Matrix& matrix() noexcept { return rho_; }

  [[nodiscard]] std::complex<double> trace() const { return rho_.trace(); }
  /// Tr(rho a^dagger a).
  [[nodiscard]] double mean_number() const;
  /// <beta| rho |beta>.
  [[nodiscard]] double overlap(std::complex<double> beta) const;

  /// Checks Hermiticity (1e-10), unit trace (1e-9) and eigenvalues >= -1e-8.
  /// Throws StateError describing the first violation.
  void validate() const;

 private:
  Matrix rho_;
};

/// d rho/dt = -i[H, rho] + kappa1 L[a^dagger] rho + kappa2 L[a^2] rho with
/// H = omega_m a^dagger a and L[o] rho = 2 o rho o^dagger - o^dagger o rho - rho o^dagger o,
/// using the truncated ladder operators (so the trace is conserved exactly).
Matrix lindblad_rhs(const Matrix& rho, const OscillatorParams& params);

/// One RK4 step followed by trace renormalization. Throws StepSizeError when the
/// trace drifts by more than 1e-6 in the step.
void lindblad_step(DensityMatrix& rho, const OscillatorParams& params, double dt);

/// Evolves for `duration` with RK4 steps no longer than `max_dt`.
void evolve(DensityMatrix& rho, const OscillatorParams& params, double duration, double max_dt = 1e-3);

struct SteadyStateOptions {
  double dt = 1e-2;          // the fixed point does not depend on the step
  double tolerance = 1e-9;   // on ||d rho/dt||_F
  double max_time = 1e5;
};

/// Long-time RK4 integration from the vacuum until ||d rho/dt||_F < tolerance.
/// Throws NumericalError if max_time is reached first.
DensityMatrix steady_state(const OscillatorParams& params, std::size_t dim, const SteadyStateOptions& options = {});

/// exp(alpha a^dagger - alpha* a) in a dim-dimensional truncation. Throws
/// TruncationError unless |alpha|^2 < dim / 4.
Matrix displacement(std::complex<double> alpha, std::size_t dim);

/// Same without the truncation guard (callers handle the guard themselves).
Matrix displacement_unchecked(std::complex<double> alpha, std::size_t dim);

/// sqrt(Tr(rho_s a^dagger a)) exp(-i omega_m t): the rotating coherent target.
std::complex<double> target_state(const DensityMatrix& rho_steady, double t, const OscillatorParams& params);

struct Projection {
  DensityMatrix post;
  double probability = 0.0;  // of the requested outcome
  double p1 = 0.0;           // <alpha|rho|alpha>
};

/// Applies outcome 1 (M1 = |alpha><alpha|) or 2 (M2 = 1 - |alpha><alpha|) to rho.
/// Throws RenormalizationError if that outcome has probability below 1e-12.
Projection project(const DensityMatrix& rho, std::complex<double> alpha, int outcome);

struct DichotomicOutcome {
  int outcome = 1;
  DensityMatrix post;
  double probability = 0.0;
  double p1 = 0.0;
};

/// Samples the two-outcome measurement {|alpha><alpha|, 1 - |alpha><alpha|}.
DichotomicOutcome dichotomic_measure(const DensityMatrix& rho, std::complex<double> alpha, RandomStream& rng);

enum class SurvivalStart { m1, m2 };

struct SurvivalCurve {
  std::vector<double> delta_t;
  std::vector<double> p1;
  double c_m = 0.0;  // slope of 1 - P1 at small delta_t
  std::vector<std::uint64_t> n;
  std::vector<double> p_t1;  // [P1(t/n)]^n
  double total_time = 0.0;
  double target_amplitude = 0.0;
};

struct SurvivalOptions {
  std::size_t dim = 50;
  SurvivalStart start = SurvivalStart::m1;
  double total_time = 2.0;       // for P_t1
  std::vector<std::uint64_t> n;  // measurement counts for P_t1
  double max_dt = 1e-3;
};

/// From the chosen post-measurement state, evolves delta_t and measures
/// P1 against the rotated target. The m2 start is the outcome-2 state of
/// the steady state measured at the t = 0 target.
SurvivalCurve survival_experiment(const OscillatorParams& params, std::span<const double> delta_t_grid,
                                  const SurvivalOptions& options);
/// Same with a precomputed steady state.
SurvivalCurve survival_experiment(const OscillatorParams& params, const DensityMatrix& rho_steady,
                                  std::span<const double> delta_t_grid, const SurvivalOptions& options);

/// Least-squares slope c of 1 - P1 = c dt over the five smallest grid points with P1 > 0.9.
/// Throws ArgumentError on a length mismatch and StateError when no point qualifies.
double fit_survival_rate(std::span<const double> delta_t, std::span<const double> p1);

struct WignerGrid {
  double h = 0.0;       // spacing in Q = 2 Re alpha units
  double extent = 0.0;  // grid spans [-extent, extent] in Q and P
  std::size_t bins = 0;
  std::vector<double> values;  // row-major, P outer; W per d^2 alpha (vacuum peak 2/pi)
  bool truncation_warning = false;

  [[nodiscard]] double min() const;
  [[nodiscard]] double max() const;
};

/// W(alpha) = (2/pi) Tr[D^dagger(alpha) rho D(alpha) Parity] on a Q-P grid
/// with alpha = (Q + iP)/2. Grid points beyond the truncation guard set the
/// warning flag instead of throwing.
WignerGrid wigner_from_density(const DensityMatrix& rho, double h, double extent);

/// Wigner function at a single phase-space point.
double wigner_at(const DensityMatrix& rho, std::complex<double> alpha);

}  // namespace vdp::fock
