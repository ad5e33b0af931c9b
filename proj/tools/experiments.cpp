#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "vdpzeno/coupled.hpp"
#include "vdpzeno/errors.hpp"
#include "vdpzeno/fock.hpp"
#include "vdpzeno/io.hpp"
#include "vdpzeno/measurement.hpp"
#include "vdpzeno/oscillator.hpp"
#include "vdpzeno/phase_space.hpp"
#include "vdpzeno/spectral.hpp"

#ifndef VDPZENO_VERSION
#define VDPZENO_VERSION "0.0.0"
#endif

namespace vdp::cli {

namespace {

using io::number;
constexpr double kPi = std::numbers::pi;

ParamSpec num(std::string key, double desk, std::string help) {
  return {std::move(key), ParamKind::number, desk, nullptr, std::move(help)};
}
ParamSpec integer(std::string key, std::uint64_t desk, std::string help, Json paper = nullptr) {
  return {std::move(key), ParamKind::integer, desk, std::move(paper), std::move(help)};
}
ParamSpec nums(std::string key, std::vector<double> desk, std::string help) {
  return {std::move(key), ParamKind::number_list, desk, nullptr, std::move(help)};
}
ParamSpec ints(std::string key, std::vector<std::uint64_t> desk, std::string help) {
  return {std::move(key), ParamKind::integer_list, desk, nullptr, std::move(help)};
}
ParamSpec text(std::string key, std::string desk, std::string help) {
  return {std::move(key), ParamKind::text, desk, nullptr, std::move(help)};
}

std::vector<ParamSpec> with_common(std::vector<ParamSpec> specs, const std::string& name) {
  specs.push_back(integer("seed", 1, "root seed of every random stream"));
  specs.push_back(text("out_dir", "vdpzeno-out/" + name, "output directory"));
  return specs;
}

OscillatorParams oscillator_params(const ExperimentConfig& c) {
  return {c.number("omega_m"), c.number("kappa1"), c.number("kappa2")};
}

coupled::CoupledParams coupled_params(const ExperimentConfig& c) {
  coupled::CoupledParams p;
  p.omega_m1 = c.number("omega_m1");
  p.delta_omega = c.number("delta_omega");
  p.kappa1 = c.number("kappa1");
  p.kappa2 = c.number("kappa2");
  p.mu = c.number("mu");
  return p;
}

IntegratorConfig integrator(const ExperimentConfig& c, unsigned workers) {
  IntegratorConfig cfg;
  cfg.dt = c.number("dt");
  if (c.params.contains("record_stride")) cfg.record_stride = c.integer("record_stride");
  cfg.seed = c.integer("seed");
  cfg.workers = workers;
  return cfg;
}

// A measurement interval of 0 stands for "no measurement".
MeasurementSchedule schedule_for(double delta_t, double total_time) {
  return delta_t == 0.0 ? MeasurementSchedule::none(total_time) : MeasurementSchedule::every(delta_t, total_time);
}

std::string interval_label(double delta_t) { return delta_t == 0.0 ? "inf" : number(delta_t); }

std::string density_label(double x) {
  return x == std::floor(x) && std::abs(x) < 1e15 ? number(static_cast<long long>(x)) : number(x);
}

// ---- checks shared by several experiments ----

struct Checker {
  std::vector<std::string> violations;

  template <class Fn>
  void guard(Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      violations.emplace_back(e.what());
    }
  }
  void require(bool ok, const std::string& what) {
    if (!ok) violations.push_back(what);
  }
  void intervals(std::span<const double> delta_ts, double dt, double total_time) {
    for (double d : delta_ts) {
      if (d == 0.0) continue;
      guard([&] { MeasurementSchedule::every(d, total_time).validate(dt); });
    }
  }
  void memory(Json& notes, double bytes) {
    notes["memory_estimate_bytes"] = static_cast<std::uint64_t>(bytes);
    const double phys = static_cast<double>(::sysconf(_SC_PHYS_PAGES)) * static_cast<double>(::sysconf(_SC_PAGESIZE));
    if (phys > 0.0 && bytes > phys) {
      violations.push_back("estimated memory " + number(bytes / 1e9) + " GB exceeds physical memory " +
                           number(phys / 1e9) + " GB");
    }
  }
};

constexpr double kTrajectoryBytes = sizeof(Complex) + sizeof(RandomStream);

std::string csv(const std::ostringstream& s) { return s.str(); }

// ---- wigner-panels ----

Experiment wigner_panels() {
  Experiment e;
  e.name = "wigner-panels";
  e.summary = "phase-space histograms of the ensemble for several measurement intervals and times";
  e.params = with_common(
      {num("omega_m", 1.0, "oscillator frequency"), num("kappa1", 0.1, "linear gain"),
       num("kappa2", 0.005, "two-excitation loss"), num("dt", 0.005, "integration step"),
       integer("n_traj", 50000, "trajectories", 500000),
       nums("delta_t", {0.0, 10.0, 1.0}, "measurement intervals, one row each (0 = none)"),
       nums("times", {0.0, 60.0, 120.0, 180.0}, "snapshot times, one column each"),
       num("h", 0.2, "histogram bin width in Q, P units"), num("extent", 10.0, "grid half-width in Q, P units")},
      e.name);
  e.check = [](const ExperimentConfig& c, Json& notes) {
    Checker k;
    const auto p = oscillator_params(c);
    const auto times = c.numbers("times");
    k.guard([&] { p.validate(); });
    k.guard([&] { integrator(c, 1).validate(p); });
    k.require(c.integer("n_traj") >= 1, "n_traj must be at least 1");
    k.require(!times.empty(), "times must not be empty");
    k.require(std::all_of(times.begin(), times.end(), [](double t) { return t >= 0.0; }), "times must be >= 0");
    k.require(c.number("h") > 0.0 && c.number("extent") > 0.0, "h and extent must be positive");
    const double t_max = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
    k.intervals(c.numbers("delta_t"), c.number("dt"), t_max);
    const double n = static_cast<double>(c.integer("n_traj"));
    k.memory(notes, n * kTrajectoryBytes + n * sizeof(Complex) * static_cast<double>(times.size()));
    notes["panels"] = c.numbers("delta_t").size() * times.size();
    return k.violations;
  };
  e.run = [](const ExperimentConfig& c, unsigned workers, OutputSet& out) {
    const auto p = oscillator_params(c);
    const auto cfg = integrator(c, workers);
    const auto times = c.numbers("times");
    const double t_max = *std::max_element(times.begin(), times.end());
    const double h = c.number("h");
    const double extent = c.number("extent");
    std::ostringstream panels;
    panels << "delta_t,time,circular_spread_rad,mean_amplitude,dropped_fraction,file\n";
    for (double delta_t : c.numbers("delta_t")) {
      MeasuredRunOptions opts;
      opts.n_traj = c.integer("n_traj");
      opts.init_center = {0.5 * limit_cycle_radius(p), 0.0};
      opts.snapshot_times = times;
      opts.record_series = false;
      const auto run = run_measured_evolution(p, schedule_for(delta_t, t_max), cfg, opts);
      for (const auto& snap : run.snapshots) {
        const auto hist = wigner_histogram(snap.states, h, extent);
        GridMeta meta{"wigner-histogram", h, extent, hist.n_total, hist.dropped, snap.time, false};
        std::ostringstream grid;
        write_grid_csv(grid, meta, hist.bins, hist.density());
        const std::string file = "wigner_dt" + interval_label(delta_t) + "_t" + density_label(snap.time) + ".csv";
        out.write(file, csv(grid));
        double radius = 0.0;
        for (auto a : snap.states) radius += std::abs(a);
        radius /= static_cast<double>(snap.states.size());
        const double spread = circular_spread(phase_distribution(std::span<const Complex>(snap.states), 64));
        io::row(panels, {interval_label(delta_t), number(snap.time), number(spread), number(radius),
                         number(static_cast<double>(hist.dropped) / static_cast<double>(hist.n_total)), file});
      }
      out.progress("wigner-panels: delta_t=" + interval_label(delta_t) + " done");
    }
    out.write("panels.csv", csv(panels));
    out.summary()["limit_cycle_radius"] = limit_cycle_radius(p);
  };
  return e;
}

// ---- zeno-spectrum ----

Experiment zeno_spectrum() {
  Experiment e;
  e.name = "zeno-spectrum";
  e.summary = "spectrum of the mean quadrature versus the number of measurements in a fixed time";
  e.params = with_common(
      {num("omega_m", 1.0, "oscillator frequency"), num("kappa1", 0.1, "linear gain"),
       num("kappa2", 0.005, "two-excitation loss"), num("dt", 0.005, "integration step"),
       integer("record_stride", 10, "steps between recorded means"), integer("n_traj", 5000, "trajectories"),
       num("total_time", 600.0, "record length"),
       ints("n", {0, 16, 100, 211, 1000, 6000, 120000}, "measurement counts in total_time (0 = none)"),
       num("omega_max", 3.0, "highest frequency written")},
      e.name);
  e.check = [](const ExperimentConfig& c, Json& notes) {
    Checker k;
    const auto p = oscillator_params(c);
    k.guard([&] { p.validate(); });
    k.guard([&] { integrator(c, 1).validate(p); });
    k.require(c.integer("n_traj") >= 1, "n_traj must be at least 1");
    k.require(c.number("total_time") > 0.0, "total_time must be positive");
    std::vector<double> intervals;
    for (auto n : c.integers("n")) {
      if (n > 0) intervals.push_back(c.number("total_time") / static_cast<double>(n));
    }
    k.intervals(intervals, c.number("dt"), c.number("total_time"));
    const double samples = c.number("total_time") / (c.number("dt") * static_cast<double>(c.integer("record_stride")));
    k.memory(notes, static_cast<double>(c.integer("n_traj")) * kTrajectoryBytes + samples * sizeof(EnsembleStats));
    k.guard([&] { notes["n_c"] = spectral::critical_interval(p, c.number("total_time")).n_c; });
    return k.violations;
  };
  e.run = [](const ExperimentConfig& c, unsigned workers, OutputSet& out) {
    const auto p = oscillator_params(c);
    const auto cfg = integrator(c, workers);
    const double total = c.number("total_time");
    const double omega_max = c.number("omega_max");
    const auto crit = spectral::critical_interval(p, total);
    std::ostringstream spec, peaks;
    spec << "# total_time=" << number(total) << " n_c=" << number(crit.n_c) << '\n';
    spec << "n,omega,magnitude\n";
    peaks << "n,delta_t,peak_at_omega_m,argmax_omega,max_over_median\n";
    for (auto n : c.integers("n")) {
      const std::uint64_t ns[] = {n};
      const auto rows = spectral::zeno_spectrum(p, cfg, c.integer("n_traj"), total, ns, omega_max);
      const auto& s = rows.front().spectrum;
      for (std::size_t m = 0; m < s.frequencies.size(); ++m) {
        io::row(spec, {number(n), number(s.frequencies[m]), number(s.magnitudes[m])});
      }
      // Band (0, 2 omega_m]: the zero-frequency bin carries the mean offset.
      std::vector<double> band;
      for (std::size_t m = 1; m < s.frequencies.size(); ++m) {
        if (s.frequencies[m] <= 2.0 * p.omega_m) band.push_back(s.magnitudes[m]);
      }
      std::vector<double> sorted = band;
      std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
      const double median = sorted[sorted.size() / 2];
      const double top = *std::max_element(band.begin(), band.end());
      const std::size_t arg = s.argmax(s.d_omega * 0.5, 2.0 * p.omega_m);
      io::row(peaks, {number(n), n == 0 ? "inf" : number(total / static_cast<double>(n)),
                      number(s.magnitudes[s.nearest_index(p.omega_m)]), number(s.frequencies[arg]),
                      number(median > 0.0 ? top / median : 0.0)});
      out.progress("zeno-spectrum: n=" + number(n) + " done");
    }
    out.write("spectrum.csv", csv(spec));
    out.write("peaks.csv", csv(peaks));
    out.summary()["delta_t_c"] = crit.delta_t_c;
    out.summary()["n_c"] = crit.n_c;
  };
  return e;
}

// ---- threshold-scan ----

Experiment threshold_scan() {
  Experiment e;
  e.name = "threshold-scan";
  e.summary = "normalized spectral peak versus kappa2/kappa1 at a fixed measurement interval";
  e.params = with_common(
      {num("omega_m", 1.0, "oscillator frequency"), num("kappa1", 0.1, "linear gain"),
       nums("ratios", {1e-4, 2e-4, 3e-4, 5e-4, 7e-4, 1e-3, 2e-3, 3e-3, 5e-3, 7e-3, 1e-2}, "kappa2/kappa1 values"),
       num("delta_t", 0.3, "measurement interval"), num("total_time", 600.0, "record length"),
       integer("repeats", 10, "single-trajectory runs averaged per ratio"), num("dt", 0.005, "integration step"),
       integer("record_stride", 10, "steps between recorded values")},
      e.name);
  e.check = [](const ExperimentConfig& c, Json& notes) {
    Checker k;
    const auto ratios = c.numbers("ratios");
    k.require(!ratios.empty(), "ratios must not be empty");
    for (double r : ratios) {
      const OscillatorParams p{c.number("omega_m"), c.number("kappa1"), r * c.number("kappa1")};
      k.guard([&] { p.validate(); });
    }
    k.guard([&] { integrator(c, 1).validate({c.number("omega_m"), c.number("kappa1"), 1.0}); });
    k.require(c.integer("repeats") >= 1, "repeats must be at least 1");
    const double d[] = {c.number("delta_t")};
    k.require(d[0] > 0.0, "delta_t must be positive");
    k.intervals(d, c.number("dt"), c.number("total_time"));
    k.guard([&] { notes["threshold_ratio"] = spectral::threshold_ratio(c.number("omega_m") * d[0]); });
    k.memory(notes, c.number("total_time") / c.number("dt") * sizeof(EnsembleStats));
    return k.violations;
  };
  e.run = [](const ExperimentConfig& c, unsigned workers, OutputSet& out) {
    auto cfg = integrator(c, workers);
    const auto ratios = c.numbers("ratios");
    const double omega_dt = c.number("omega_m") * c.number("delta_t");
    std::ostringstream scan;
    scan << "# delta_t=" << number(c.number("delta_t")) << " total_time=" << number(c.number("total_time"))
         << " threshold_ratio=" << number(spectral::threshold_ratio(omega_dt)) << '\n';
    scan << "ratio,kappa2,peak_normalized\n";
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      IntegratorConfig run_cfg = cfg;
      run_cfg.seed = mix_seed(cfg.seed + i);
      const double r[] = {ratios[i]};
      const auto pts = spectral::normalized_peak_scan(c.number("omega_m"), c.number("kappa1"), r, c.number("delta_t"),
                                                      c.number("total_time"), run_cfg, c.integer("repeats"));
      io::row(scan, {number(ratios[i]), number(ratios[i] * c.number("kappa1")), number(pts.front().peak)});
      out.progress("threshold-scan: ratio=" + number(ratios[i]) + " done");
    }
    out.write("scan.csv", csv(scan));
    out.summary()["threshold_ratio"] = spectral::threshold_ratio(omega_dt);
  };
  return e;
}

// ---- dichotomic-survival ----

Experiment dichotomic_survival() {
  Experiment e;
  e.name = "dichotomic-survival";
  e.summary = "coherent-state survival under repeated yes/no measurements, with Wigner maps";
  e.params = with_common(
      {num("omega_m", 1.0, "oscillator frequency"), num("kappa1", 0.1, "linear gain"),
       num("kappa2", 0.005, "two-excitation loss"), integer("dim", 50, "Fock truncation"),
       text("start", "m1", "post-measurement start: m1 (coherent) or m2 (complement)"),
       num("delta_t_max", 2.0, "largest interval of the P1 curve"),
       integer("delta_t_points", 40, "points of the P1 curve"), num("total_time", 2.0, "window of P_t1"),
       ints("n", {10, 20, 50, 100, 200, 500, 1000}, "measurement counts for P_t1"),
       num("max_dt", 1e-3, "largest RK4 step"),
       num("wigner_time", 60.0, "free evolution of the coherent input before the M2 outcome"),
       num("wigner_h", 0.2, "Wigner grid spacing in Q, P units"),
       num("wigner_extent", 8.0, "Wigner grid half-width in Q, P units")},
      e.name);
  e.check = [](const ExperimentConfig& c, Json& notes) {
    Checker k;
    const auto p = oscillator_params(c);
    k.guard([&] { p.validate(); });
    const auto start = c.text("start");
    k.require(start == "m1" || start == "m2", "start must be m1 or m2");
    const double dim = static_cast<double>(c.integer("dim"));
    k.require(dim >= 4, "dim must be at least 4");
    // The target amplitude squared is close to the classical kappa1/(2 kappa2) + 1.
    const double target_sq = c.number("kappa1") / (2.0 * c.number("kappa2")) + 1.0;
    k.require(target_sq < dim / 4.0, "target |alpha|^2 ~ " + number(target_sq) + " violates the truncation guard dim/4 = " +
                                         number(dim / 4.0));
    const double corner = 0.5 * c.number("wigner_extent") * std::numbers::sqrt2;
    notes["wigner_grid_beyond_guard"] = corner * corner >= dim / 4.0;
    k.require(c.number("delta_t_max") > 0.0 && c.integer("delta_t_points") >= 5,
              "delta_t_max must be positive and delta_t_points at least 5");
    k.require(c.number("max_dt") > 0.0, "max_dt must be positive");
    for (auto n : c.integers("n")) k.require(n >= 1, "measurement counts must be at least 1");
    k.require(c.number("wigner_h") > 0.0 && c.number("wigner_extent") > 0.0, "Wigner grid needs positive h, extent");
    k.memory(notes, 16.0 * dim * dim * 12.0);
    return k.violations;
  };
  e.run = [](const ExperimentConfig& c, unsigned, OutputSet& out) {
    const auto p = oscillator_params(c);
    const std::size_t dim = c.integer("dim");
    const auto rho_s = fock::steady_state(p, dim);
    out.progress("dichotomic-survival: steady state <n> = " + number(rho_s.mean_number()));

    std::vector<double> grid(c.integer("delta_t_points"));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      grid[k] = c.number("delta_t_max") * static_cast<double>(k + 1) / static_cast<double>(grid.size());
    }
    fock::SurvivalOptions opts;
    opts.dim = dim;
    opts.start = c.text("start") == "m2" ? fock::SurvivalStart::m2 : fock::SurvivalStart::m1;
    opts.total_time = c.number("total_time");
    opts.n = c.integers("n");
    opts.max_dt = c.number("max_dt");
    const auto curve = fock::survival_experiment(p, rho_s, grid, opts);

    std::ostringstream surv, pt1;
    surv << "# start=" << c.text("start") << " target_amplitude=" << number(curve.target_amplitude) << '\n';
    surv << "delta_t,p1\n";
    for (std::size_t k = 0; k < curve.delta_t.size(); ++k) io::row(surv, {number(curve.delta_t[k]), number(curve.p1[k])});
    pt1 << "# total_time=" << number(curve.total_time) << " c_m=" << number(curve.c_m) << '\n';
    pt1 << "n,delta_t,p_t1\n";
    for (std::size_t k = 0; k < curve.n.size(); ++k) {
      io::row(pt1, {number(curve.n[k]), number(curve.total_time / static_cast<double>(curve.n[k])),
                    number(curve.p_t1[k])});
    }
    out.write("survival.csv", csv(surv));
    out.write("pt1.csv", csv(pt1));
    out.progress("dichotomic-survival: survival curve done");

    // Coherent input on the target orbit, phase-diffused by free evolution,
    // then the complementary outcome against the target at that time.
    const double t_w = c.number("wigner_time");
    auto rho = fock::DensityMatrix::coherent(dim, fock::target_state(rho_s, 0.0, p));
    fock::evolve(rho, p, t_w, c.number("max_dt"));
    const auto post = fock::project(rho, fock::target_state(rho_s, t_w, p), 2);
    const double h = c.number("wigner_h");
    const double extent = c.number("wigner_extent");
    bool beyond = false;
    double min_m2 = 0.0;
    const std::pair<std::string, const fock::DensityMatrix*> maps[] = {{"input", &rho}, {"m2", &post.post}};
    for (const auto& [label, state] : maps) {
      const auto w = fock::wigner_from_density(*state, h, extent);
      beyond = beyond || w.truncation_warning;
      if (label == "m2") min_m2 = w.min();
      GridMeta meta{"wigner-fock-" + label, h, extent, 0, 0, t_w, false};
      std::ostringstream g;
      write_grid_csv(g, meta, w.bins, w.values);
      out.write("wigner_" + label + ".csv", csv(g));
    }
    out.progress("dichotomic-survival: Wigner maps done");
    out.summary()["steady_mean_number"] = rho_s.mean_number();
    out.summary()["c_m"] = curve.c_m;
    out.summary()["m2_probability"] = post.probability;
    out.summary()["m2_wigner_min"] = min_m2;
    out.summary()["wigner_truncation_warning"] = beyond;
  };
  return e;
}

// ---- coupled-sync and sync-scan ----

std::vector<ParamSpec> coupled_specs() {
  return {num("omega_m1", 1.0, "frequency of oscillator 1"),
          num("delta_omega", 0.01, "omega_m1 - omega_m2"),
          num("kappa1", 0.1, "linear gain"),
          num("kappa2", 0.005, "two-excitation loss"),
          num("mu", 0.02, "coupling rate"),
          num("dt", 0.01, "integration step"),
          num("theta0", kPi / 2.0, "initial phase difference"),
          integer("n_bins", 64, "phase-difference bins"),
          num("total_time", 1000.0, "run length T"),
          num("sample_every", 1.0, "time between distribution samples"),
          num("baseline_from", 300.0, "start of the stationary window of the unmeasured run")};
}

void set_desk(std::vector<ParamSpec>& specs, const std::string& key, Json value) {
  for (auto& s : specs) {
    if (s.key == key) s.desk = std::move(value);
  }
}

void check_coupled(Checker& k, const ExperimentConfig& c, Json& notes, double runs) {
  const auto p = coupled_params(c);
  k.guard([&] { p.validate(); });
  k.guard([&] { integrator(c, 1).validate(p.oscillator(1)); });
  k.require(c.integer("n_traj") >= 1, "n_traj must be at least 1");
  k.require(c.integer("n_bins") >= 8 && c.integer("n_bins") % 2 == 0, "n_bins must be even and at least 8");
  k.require(c.number("total_time") > 0.0, "total_time must be positive");
  const double every = c.number("sample_every");
  k.require(every >= c.number("dt"), "sample_every must be at least dt");
  k.require(c.number("baseline_from") < c.number("total_time"), "baseline_from must lie inside the run");
  const double samples = c.number("total_time") / std::max(every, c.number("dt")) + 1.0;
  k.memory(notes, static_cast<double>(c.integer("n_traj")) * (2.0 * sizeof(Complex) + sizeof(RandomStream)) +
                      runs * samples * static_cast<double>(c.integer("n_bins")) * sizeof(double));
}

coupled::CoupledRunOptions run_options(const ExperimentConfig& c) {
  coupled::CoupledRunOptions o;
  o.n_traj = c.integer("n_traj");
  o.theta_minus0 = c.number("theta0");
  o.n_bins = c.integer("n_bins");
  o.sample_stride = std::max<std::uint64_t>(1, steps_for(c.number("sample_every"), c.number("dt")));
  return o;
}

Experiment coupled_sync() {
  Experiment e;
  e.name = "coupled-sync";
  e.summary = "phase-difference distribution of two coupled oscillators over time";
  auto specs = coupled_specs();
  specs.push_back(integer("n_traj", 10000, "oscillator pairs", 1000000));
  specs.push_back(num("delta_t", 0.0, "measurement interval (0 = none)"));
  set_desk(specs, "sample_every", 10.0);
  e.params = with_common(std::move(specs), e.name);
  e.check = [](const ExperimentConfig& c, Json& notes) {
    Checker k;
    check_coupled(k, c, notes, 1.0);
    const double d[] = {c.number("delta_t")};
    k.intervals(d, c.number("dt"), c.number("total_time"));
    return k.violations;
  };
  e.run = [](const ExperimentConfig& c, unsigned workers, OutputSet& out) {
    const auto p = coupled_params(c);
    const auto run = coupled::run_coupled(p, schedule_for(c.number("delta_t"), c.number("total_time")),
                                          integrator(c, workers), run_options(c));
    std::ostringstream dist, peaks;
    dist << "time,theta,density\n";
    peaks << "time,w0,wpi,mean_resultant_length\n";
    for (std::size_t i = 0; i < run.times.size(); ++i) {
      const auto& d = run.distributions[i];
      for (std::size_t b = 0; b < d.n_bins(); ++b) {
        io::row(dist, {number(run.times[i]), number(d.bin_center(b)), number(d.density[b])});
      }
      io::row(peaks, {number(run.times[i]), number(d.at(0.0)), number(d.at(kPi)), number(mean_resultant_length(d))});
    }
    out.write("distributions.csv", csv(dist));
    out.write("peaks.csv", csv(peaks));
    out.summary()["sync_degree"] = coupled::sync_degree(run.distributions);
    if (c.number("delta_t") == 0.0) {
      std::vector<PhaseDistribution> late;
      for (std::size_t i = 0; i < run.times.size(); ++i) {
        if (run.times[i] >= c.number("baseline_from")) late.push_back(run.distributions[i]);
      }
      if (!late.empty()) {
        const auto avg = average(late);
        out.summary()["stationary_w0"] = avg.at(0.0);
        out.summary()["stationary_wpi"] = avg.at(kPi);
        out.summary()["stationary_baseline"] = coupled::stationary_baseline(run, c.number("baseline_from"));
      }
    }
    out.summary()["collapses"] = run.collapses.size();
    out.progress("coupled-sync: done");
  };
  return e;
}

Experiment sync_scan() {
  Experiment e;
  e.name = "sync-scan";
  e.summary = "synchronization degree S/S_l versus measurement interval";
  auto specs = coupled_specs();
  specs.push_back(integer("n_traj", 2000, "oscillator pairs per repetition", 50000));
  specs.push_back(integer("repetitions", 5, "independent repetitions M", 20));
  specs.push_back(nums("delta_t", {2.0, 10.0, 50.0}, "measurement intervals"));
  e.params = with_common(std::move(specs), e.name);
  e.check = [](const ExperimentConfig& c, Json& notes) {
    Checker k;
    check_coupled(k, c, notes, static_cast<double>(c.integer("repetitions")));
    k.require(c.integer("repetitions") >= 1, "repetitions must be at least 1");
    const auto intervals = c.numbers("delta_t");
    k.require(!intervals.empty(), "delta_t must not be empty");
    for (double d : intervals) k.require(d > 0.0, "scan intervals must be positive");
    k.intervals(intervals, c.number("dt"), c.number("total_time"));
    return k.violations;
  };
  e.run = [](const ExperimentConfig& c, unsigned workers, OutputSet& out) {
    const auto p = coupled_params(c);
    const auto cfg = integrator(c, workers);
    const auto opts = run_options(c);
    const double total = c.number("total_time");
    const auto baseline_run = coupled::run_coupled(p, MeasurementSchedule::none(total), cfg, opts);
    const double s_l = coupled::stationary_baseline(baseline_run, c.number("baseline_from"));
    out.progress("sync-scan: baseline S_l = " + number(s_l));

    std::ostringstream scan, reps;
    scan << "# baseline_from=" << number(c.number("baseline_from")) << " total_time=" << number(total) << '\n';
    scan << "delta_t,S,sigma,S_l,ratio,ratio_sigma\n";
    reps << "delta_t,repetition,S_i\n";
    for (double delta_t : c.numbers("delta_t")) {
      std::vector<std::vector<PhaseDistribution>> series;
      for (std::uint64_t r = 0; r < c.integer("repetitions"); ++r) {
        IntegratorConfig run_cfg = cfg;
        run_cfg.seed = mix_seed(cfg.seed + 1 + r);
        series.push_back(coupled::run_coupled(p, MeasurementSchedule::every(delta_t, total), run_cfg, opts).distributions);
      }
      const auto res = coupled::sync_measure(series, s_l);
      for (std::size_t r = 0; r < res.per_repetition.size(); ++r) {
        io::row(reps, {number(delta_t), number(r), number(res.per_repetition[r])});
      }
      io::row(scan, {number(delta_t), number(res.mean), number(res.sigma), number(s_l),
                     number(res.ratio.value_or(0.0)), number(res.ratio_sigma.value_or(0.0))});
      out.progress("sync-scan: delta_t=" + number(delta_t) + " done");
    }
    out.write("scan.csv", csv(scan));
    out.write("repetitions.csv", csv(reps));
    out.summary()["baseline"] = s_l;
  };
  return e;
}

}  // namespace

const char* version() noexcept { return VDPZENO_VERSION; }

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> all = {wigner_panels(),       zeno_spectrum(), threshold_scan(),
                                              dichotomic_survival(), coupled_sync(),  sync_scan()};
  return all;
}

const Experiment& find_experiment(const std::string& name) {
  for (const auto& e : experiments()) {
    if (e.name == name) return e;
  }
  std::string known;
  for (const auto& e : experiments()) known += (known.empty() ? "" : ", ") + e.name;
  throw UsageError("unknown experiment '" + name + "' (known: " + known + ")");
}

ValidationReport validate(const ExperimentConfig& cfg) {
  const auto& e = find_experiment(cfg.experiment);
  ValidationReport report;
  for (const auto& spec : e.params) {
    if (!cfg.params.contains(spec.key)) report.violations.push_back("missing parameter '" + spec.key + "'");
  }
  for (const auto& [key, value] : cfg.params.items()) {
    const bool known = std::any_of(e.params.begin(), e.params.end(), [&](const ParamSpec& s) { return s.key == key; });
    if (!known) report.violations.push_back("unknown parameter '" + key + "'");
  }
  if (report.clean()) report.violations = e.check(cfg, report.notes);
  return report;
}

Json run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  const auto& e = find_experiment(cfg.experiment);
  const auto report = validate(cfg);
  if (!report.clean()) {
    std::string msg = "invalid configuration for '" + cfg.experiment + "':";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw UsageError(msg);
  }
  const std::filesystem::path dir = options.out_dir.empty() ? std::filesystem::path(cfg.text("out_dir")) : options.out_dir;
  OutputSet out(dir, options.progress);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    e.run(cfg, std::max(1u, options.workers), out);
  } catch (const NumericalError& err) {
    throw NumericalError(cfg.experiment + ": " + err.what());
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Json manifest = Json::object();
  manifest["tool"] = "vdpzeno";
  manifest["version"] = version();
  manifest["experiment"] = cfg.experiment;
  manifest["config"] = cfg.params;
  manifest["seed"] = cfg.integer("seed");
  manifest["workers"] = std::max(1u, options.workers);
  manifest["paper_scale"] = options.paper_scale;
  manifest["wall_time_s"] = wall;
  Json files = Json::array();
  for (const auto& f : out.files()) files.push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  manifest["outputs"] = files;
  manifest["summary"] = out.summary();
  write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace vdp::cli
