#include "vdpzeno/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "vdpzeno/errors.hpp"

namespace vdp::fock {

namespace {

using cd = std::complex<double>;

// Diagonalization of i(a^dagger - a); D(x) = V exp(-i x lambda) V^dagger for real x.
struct DisplacementBasis {
  Eigen::MatrixXcd vectors;
  Eigen::VectorXd values;
};

std::shared_ptr<const DisplacementBasis> displacement_basis(std::size_t dim) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const DisplacementBasis>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(dim); it != cache.end()) return it->second;

  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double s = std::sqrt(static_cast<double>(k + 1));
    gen(k + 1, k) = cd(0.0, s);   // i a^dagger
    gen(k, k + 1) = cd(0.0, -s);  // -i a
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gen);
  auto basis = std::make_shared<DisplacementBasis>();
  basis->vectors = solver.eigenvectors();
  basis->values = solver.eigenvalues();
  cache.emplace(dim, basis);
  return basis;
}

void check_guard(cd alpha, std::size_t dim) {
  if (!(std::norm(alpha) < static_cast<double>(dim) / 4.0)) {
    throw TruncationError("displacement |alpha|^2 = " + std::to_string(std::norm(alpha)) +
                          " violates the truncation guard dim/4 = " + std::to_string(static_cast<double>(dim) / 4.0));
  }
}

}  // namespace

DensityMatrix DensityMatrix::vacuum(std::size_t dim) { return number_state(dim, 0); }

DensityMatrix DensityMatrix::number_state(std::size_t dim, std::size_t n) {
  if (n >= dim) throw ArgumentError("number state outside the truncation");
  Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = 1.0;
  return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::coherent(std::size_t dim, std::complex<double> alpha) {
  const Eigen::VectorXcd psi = displacement(alpha, dim).col(0);
  return DensityMatrix(psi * psi.adjoint());
}

double DensityMatrix::mean_number() const {
  double s = 0.0;
  for (Eigen::Index n = 0; n < rho_.rows(); ++n) s += static_cast<double>(n) * rho_(n, n).real();
  return s;
}

double DensityMatrix::overlap(std::complex<double> beta) const {
  const Eigen::VectorXcd psi = displacement_unchecked(beta, dim()).col(0);
  return (psi.adjoint() * rho_ * psi)(0, 0).real();
}

void DensityMatrix::validate() const {
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw StateError("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
  const double tr_err = std::abs(rho_.trace() - cd(1.0, 0.0));
  if (tr_err > 1e-9) throw StateError("density matrix trace deviates from 1 by " + std::to_string(tr_err));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
  const double lowest = solver.eigenvalues().minCoeff();
  if (lowest < -1e-8) throw StateError("density matrix has eigenvalue " + std::to_string(lowest));
}

Matrix lindblad_rhs(const Matrix& rho, const OscillatorParams& params) {
  const Eigen::Index n = rho.rows();
  // Diagonals of a a^dagger (truncated: last entry 0) and a^dagger^2 a^2.
  thread_local std::vector<double> gain_diag, loss_diag, sq;
  if (static_cast<Eigen::Index>(gain_diag.size()) != n) {
    gain_diag.resize(static_cast<std::size_t>(n));
    loss_diag.resize(static_cast<std::size_t>(n));
    sq.resize(static_cast<std::size_t>(n));
    for (Eigen::Index m = 0; m < n; ++m) {
      const auto md = static_cast<double>(m);
      gain_diag[static_cast<std::size_t>(m)] = m + 1 < n ? md + 1.0 : 0.0;
      loss_diag[static_cast<std::size_t>(m)] = md * (md - 1.0);
      sq[static_cast<std::size_t>(m)] = std::sqrt(md);
    }
  }
  const double w = params.omega_m;
  const double k1 = params.kappa1;
  const double k2 = params.kappa2;

  Matrix out(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto ru = static_cast<std::size_t>(r);
      cd v = rho(r, c) * cd(-k1 * (gain_diag[ru] + gain_diag[cu]) - k2 * (loss_diag[ru] + loss_diag[cu]),
                            -w * static_cast<double>(r - c));
      if (r > 0 && c > 0) v += 2.0 * k1 * sq[ru] * sq[cu] * rho(r - 1, c - 1);
      if (r + 2 < n && c + 2 < n) {
        v += 2.0 * k2 * (sq[ru + 1] * sq[ru + 2]) * (sq[cu + 1] * sq[cu + 2]) * rho(r + 2, c + 2);
      }
      out(r, c) = v;
    }
  }
  return out;
}

namespace {

void rk4_from(Matrix& rho, const Matrix& k1, const OscillatorParams& params, double dt) {
  const Matrix k2 = lindblad_rhs(rho + (0.5 * dt) * k1, params);
  const Matrix k3 = lindblad_rhs(rho + (0.5 * dt) * k2, params);
  const Matrix k4 = lindblad_rhs(rho + dt * k3, params);
  rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void renormalize(Matrix& rho, double tr_before) {
  const double tr = rho.trace().real();
  if (std::abs(tr - tr_before) > 1e-6) {
    throw StepSizeError("trace drift " + std::to_string(std::abs(tr - tr_before)) +
                        " in one master-equation step; the truncation may be too small");
  }
  rho /= tr;
}

}  // namespace

void lindblad_step(DensityMatrix& rho, const OscillatorParams& params, double dt) {
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  Matrix& m = rho.matrix();
  const double tr_before = m.trace().real();
  rk4_from(m, lindblad_rhs(m, params), params, dt);
  renormalize(m, tr_before);
}

void evolve(DensityMatrix& rho, const OscillatorParams& params, double duration, double max_dt) {
  if (!(duration >= 0.0)) throw ArgumentError("duration must be non-negative");
  if (duration == 0.0) return;
  const auto steps = static_cast<std::uint64_t>(std::ceil(duration / max_dt - 1e-9));
  const double dt = duration / static_cast<double>(steps);
  for (std::uint64_t s = 0; s < steps; ++s) lindblad_step(rho, params, dt);
}

DensityMatrix steady_state(const OscillatorParams& params, std::size_t dim, const SteadyStateOptions& options) {
  params.validate();
  DensityMatrix rho = DensityMatrix::vacuum(dim);
  Matrix& m = rho.matrix();
  const auto max_steps = static_cast<std::uint64_t>(options.max_time / options.dt);
  for (std::uint64_t s = 0; s < max_steps; ++s) {
    const Matrix k1 = lindblad_rhs(m, params);
    if (k1.norm() < options.tolerance) return rho;
    const double tr_before = m.trace().real();
    rk4_from(m, k1, params, options.dt);
    renormalize(m, tr_before);
  }
  throw NumericalError("steady state not reached within max_time");
}

Matrix displacement_unchecked(std::complex<double> alpha, std::size_t dim) {
  const auto basis = displacement_basis(dim);
  const double x = std::abs(alpha);
  const double phi = std::arg(alpha);
  const auto n = static_cast<Eigen::Index>(dim);

  Eigen::VectorXcd phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::polar(1.0, -x * basis->values(k));
  // D(x) = V diag(phases) V^dagger, then rotate: D(alpha) = R D(x) R^dagger, R = diag(e^{i n phi}).
  Matrix d = basis->vectors * phases.asDiagonal() * basis->vectors.adjoint();
  if (phi != 0.0) {
    Eigen::VectorXcd rot(n);
    for (Eigen::Index k = 0; k < n; ++k) rot(k) = std::polar(1.0, static_cast<double>(k) * phi);
    d = rot.asDiagonal() * d * rot.conjugate().asDiagonal();
  }
  return d;
}

Matrix displacement(std::complex<double> alpha, std::size_t dim) {
  check_guard(alpha, dim);
  return displacement_unchecked(alpha, dim);
}

std::complex<double> target_state(const DensityMatrix& rho_steady, double t, const OscillatorParams& params) {
  return std::polar(std::sqrt(rho_steady.mean_number()), -params.omega_m * t);
}

Projection project(const DensityMatrix& rho, std::complex<double> alpha, int outcome) {
  if (outcome != 1 && outcome != 2) throw ArgumentError("dichotomic outcome must be 1 or 2");
  const Matrix d = displacement(alpha, rho.dim());
  Matrix shifted = d.adjoint() * rho.matrix() * d;
  const double p1 = std::clamp(shifted(0, 0).real(), 0.0, 1.0);
  const double prob = outcome == 1 ? p1 : 1.0 - p1;
  if (prob < 1e-12) {
    throw RenormalizationError("outcome " + std::to_string(outcome) + " has probability " + std::to_string(prob));
  }

  Projection out;
  out.p1 = p1;
  out.probability = prob;
  if (outcome == 1) {
    const Eigen::VectorXcd psi = d.col(0);
    out.post = DensityMatrix(psi * psi.adjoint());
  } else {
    shifted.row(0).setZero();
    shifted.col(0).setZero();
    shifted /= prob;
    out.post = DensityMatrix(d * shifted * d.adjoint());
  }
  return out;
}

DichotomicOutcome dichotomic_measure(const DensityMatrix& rho, std::complex<double> alpha, RandomStream& rng) {
  // Probability first, so the draw decides which branch is renormalized.
  const Matrix d = displacement(alpha, rho.dim());
  const double p1 = std::clamp((d.adjoint() * rho.matrix() * d)(0, 0).real(), 0.0, 1.0);
  const int outcome = rng.uniform() < p1 ? 1 : 2;
  auto proj = project(rho, alpha, outcome);
  return {outcome, std::move(proj.post), proj.probability, proj.p1};
}

double fit_survival_rate(std::span<const double> delta_t, std::span<const double> p1) {
  if (delta_t.size() != p1.size()) throw ArgumentError("survival grid and probabilities differ in length");
  std::vector<std::size_t> order(delta_t.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return delta_t[a] < delta_t[b]; });
  double num = 0.0, den = 0.0;
  std::size_t used = 0;
  for (auto i : order) {
    if (used == 5) break;
    if (!(delta_t[i] > 0.0) || p1[i] <= 0.9) continue;
    num += (1.0 - p1[i]) * delta_t[i];
    den += delta_t[i] * delta_t[i];
    ++used;
  }
  if (used == 0) throw StateError("no grid point with P1 > 0.9 for the survival fit");
  return num / den;
}

SurvivalCurve survival_experiment(const OscillatorParams& params, std::span<const double> delta_t_grid,
                                  const SurvivalOptions& options) {
  return survival_experiment(params, steady_state(params, options.dim), delta_t_grid, options);
}

SurvivalCurve survival_experiment(const OscillatorParams& params, const DensityMatrix& rho_steady,
                                  std::span<const double> delta_t_grid, const SurvivalOptions& options) {
  for (double dt : delta_t_grid) {
    if (!(dt >= 0.0)) throw ArgumentError("survival grid must be non-negative");
  }
  const std::complex<double> alpha0 = target_state(rho_steady, 0.0, params);
  const DensityMatrix start = options.start == SurvivalStart::m1 ? DensityMatrix::coherent(rho_steady.dim(), alpha0)
                                                                 : project(rho_steady, alpha0, 2).post;

  // P1 after a free evolution of each requested length; evaluated in ascending
  // order along one continuous evolution.
  auto p1_at = [&](std::vector<double> times) {
    std::vector<std::size_t> order(times.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });
    std::vector<double> out(times.size());
    DensityMatrix rho = start;
    double t = 0.0;
    for (auto i : order) {
      evolve(rho, params, times[i] - t, options.max_dt);
      t = times[i];
      out[i] = std::clamp(rho.overlap(target_state(rho_steady, t, params)), 0.0, 1.0);
    }
    return out;
  };

  SurvivalCurve curve;
  curve.total_time = options.total_time;
  curve.target_amplitude = std::abs(alpha0);
  curve.delta_t.assign(delta_t_grid.begin(), delta_t_grid.end());
  curve.p1 = p1_at(curve.delta_t);
  if (options.start == SurvivalStart::m1) curve.c_m = fit_survival_rate(curve.delta_t, curve.p1);

  if (!options.n.empty()) {
    std::vector<double> intervals;
    for (auto n : options.n) {
      if (n == 0) throw ArgumentError("measurement count must be positive");
      intervals.push_back(options.total_time / static_cast<double>(n));
    }
    const auto p = p1_at(intervals);
    curve.n = options.n;
    for (std::size_t i = 0; i < p.size(); ++i) curve.p_t1.push_back(std::pow(p[i], static_cast<double>(options.n[i])));
  }
  return curve;
}

double WignerGrid::min() const { return *std::min_element(values.begin(), values.end()); }
double WignerGrid::max() const { return *std::max_element(values.begin(), values.end()); }

double wigner_at(const DensityMatrix& rho, std::complex<double> alpha) {
  const Matrix d = displacement_unchecked(alpha, rho.dim());
  const Matrix rd = rho.matrix() * d;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < rd.cols(); ++k) {
    const double diag = (d.col(k).adjoint() * rd.col(k))(0, 0).real();
    acc += (k % 2 == 0) ? diag : -diag;
  }
  return 2.0 / std::numbers::pi * acc;
}

WignerGrid wigner_from_density(const DensityMatrix& rho, double h, double extent) {
  if (!(h > 0.0) || !(extent > 0.0)) throw ArgumentError("Wigner grid needs positive spacing and extent");
  WignerGrid grid;
  grid.h = h;
  grid.extent = extent;
  const auto half = static_cast<std::size_t>(std::ceil(extent / h - 1e-9));
  grid.bins = 2 * half + 1;
  grid.values.resize(grid.bins * grid.bins);
  const double guard = static_cast<double>(rho.dim()) / 4.0;
  for (std::size_t ip = 0; ip < grid.bins; ++ip) {
    const double p = (static_cast<double>(ip) - static_cast<double>(half)) * h;
    for (std::size_t iq = 0; iq < grid.bins; ++iq) {
      const double q = (static_cast<double>(iq) - static_cast<double>(half)) * h;
      const std::complex<double> alpha(0.5 * q, 0.5 * p);
      if (!(std::norm(alpha) < guard)) grid.truncation_warning = true;
      grid.values[ip * grid.bins + iq] = wigner_at(rho, alpha);
    }
  }
  return grid;
}

}  // namespace vdp::fock
