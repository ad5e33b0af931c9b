#include <doctest.h>

#include <cmath>

#include "vdpzeno/errors.hpp"
#include "vdpzeno/oscillator.hpp"

using namespace vdp;

namespace {

IntegratorConfig noise_free(double dt = 0.005) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.enable_noise = false;
  return cfg;
}

}  // namespace

TEST_CASE("limit cycle radius") {
  CHECK(limit_cycle_radius({1.0, 0.0, 0.3}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(limit_cycle_radius({1.0, 0.1, 0.005}) == doctest::Approx(6.63325).epsilon(1e-6));
  CHECK(limit_cycle_radius({1.0, 0.005, 0.01}) == doctest::Approx(2.23607).epsilon(1e-6));
  CHECK_THROWS_AS(limit_cycle_radius({1.0, 0.1, 0.0}), DomainError);
  CHECK_THROWS_AS(limit_cycle_radius({1.0, 0.1, -1.0}), DomainError);
}

TEST_CASE("drift") {
  const OscillatorParams p{1.0, 0.1, 0.005};
  CHECK(drift(0.0, p) == Complex{0.0, 0.0});
  const Complex at_one = drift(1.0, p);
  CHECK(at_one.real() == doctest::Approx(0.1));
  CHECK(at_one.imag() == doctest::Approx(-1.0));

  const double i0 = std::sqrt(p.kappa1 / (2 * p.kappa2) + 1.0);
  for (double phase : {0.0, 0.7, 2.5}) {
    const Complex a = std::polar(i0, phase);
    CHECK(std::abs((std::conj(a) * drift(a, p)).real()) < 1e-12);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(OscillatorParams({0.0, 0.1, 0.005}).validate(), DomainError);
  CHECK_THROWS_AS(OscillatorParams({1.0, -0.1, 0.005}).validate(), DomainError);
  CHECK_THROWS_AS(OscillatorParams({1.0, 0.1, 0.0}).validate(), DomainError);
  CHECK_NOTHROW(OscillatorParams({1.0, 0.0, 0.005}).validate());

  const OscillatorParams p;
  IntegratorConfig cfg;
  CHECK_NOTHROW(cfg.validate(p));
  cfg.dt = 0.06;
  CHECK_THROWS_AS(cfg.validate(p), ArgumentError);
  cfg.dt = 0.05;
  CHECK_NOTHROW(cfg.validate(p));
  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(p), ArgumentError);
  cfg.dt = 0.005;
  cfg.record_stride = 0;
  CHECK_THROWS_AS(cfg.validate(p), ArgumentError);
}

TEST_CASE("noise amplitude") {
  CHECK(OscillatorParams({1.0, 0.1, 0.005}).noise_amplitude() == doctest::Approx(0.55678).epsilon(1e-5));
}

TEST_CASE("coherent initial ensemble") {
  const Complex center{3.3, -1.0};
  const std::size_t n = 1000000;
  auto ens = init_coherent(center, n, 11);
  REQUIRE(ens.size() == n);
  double mq = 0, mp = 0;
  for (auto a : ens.states()) {
    mq += (a - center).real();
    mp += (a - center).imag();
  }
  mq /= n;
  mp /= n;
  double vq = 0;
  for (auto a : ens.states()) vq += std::pow((a - center).real() - mq, 2);
  vq /= n;
  CHECK(std::abs(mq) < 0.003);
  CHECK(std::abs(mp) < 0.003);
  CHECK(vq == doctest::Approx(0.25).epsilon(0.004));

  auto one = init_coherent(center, 1, 11);
  CHECK(one.size() == 1);
  CHECK(one.states()[0] == ens.states()[0]);
  CHECK_THROWS_AS(init_coherent(center, 0, 1), ArgumentError);
}

TEST_CASE("noise increments are normalized to dt") {
  // Pure noise over one step from zero: a = sqrt(D) * zeta, E|zeta|^2 = dt.
  const OscillatorParams p{1.0, 0.1, 0.005};
  IntegratorConfig cfg;
  cfg.enable_drift = false;
  const std::size_t n = 200000;
  TrajectoryEnsemble ens(std::vector<Complex>(n), 5);
  step(ens, p, cfg);
  const double d = 3 * p.kappa1 + 2 * p.kappa2;
  double acc = 0;
  for (auto a : ens.states()) acc += std::norm(a) / (d * cfg.dt);
  CHECK(std::abs(acc / n - 1.0) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(ens.time() == doctest::Approx(cfg.dt));
  CHECK(ens.steps() == 1);
}

TEST_CASE("diffusion-only variance growth") {
  const OscillatorParams p{1.0, 0.1, 0.005};
  IntegratorConfig cfg;
  cfg.enable_drift = false;
  const std::size_t n = 20000;
  TrajectoryEnsemble ens(std::vector<Complex>(n), 8);
  const double t = 5.0;
  advance(ens, p, cfg, steps_for(t, cfg.dt));
  double v = 0;
  for (auto a : ens.states()) v += a.real() * a.real();
  v /= n;
  const double expect = (3 * p.kappa1 + 2 * p.kappa2) / 2 * t;
  // Var of a Gaussian sample variance: 2 sigma^4 / n.
  CHECK(std::abs(v - expect) < 3 * expect * std::sqrt(2.0 / n));
}

TEST_CASE("noise-free radial attractor") {
  const OscillatorParams p{1.0, 0.1, 0.005};
  const double target = limit_cycle_radius(p) / 2;
  for (Complex start : {Complex{1.0, 0.0}, Complex{0.0, 0.2}, Complex{6.0, -2.0}}) {
    TrajectoryEnsemble ens({start}, 1);
    const auto series = evolve(ens, p, noise_free(), 500.0);
    CHECK(std::abs(std::abs(ens.states()[0]) - target) < 1e-6);
    if (std::abs(start) < target) {
      bool monotone = true;
      for (std::size_t i = 1; i < series.size(); ++i) {
        monotone = monotone && series[i].mean_radius >= series[i - 1].mean_radius - 1e-12;
      }
      CHECK(monotone);
    }
  }
}

TEST_CASE("noise-free orbit on the limit cycle keeps its radius") {
  const OscillatorParams p{1.0, 0.1, 0.005};
  const double i0 = limit_cycle_radius(p) / 2;
  TrajectoryEnsemble ens({Complex{i0, 0.0}}, 1);
  const auto cfg = noise_free();
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    advance(ens, p, cfg, 100);
    worst = std::max(worst, std::abs(std::abs(ens.states()[0]) - i0));
  }
  CHECK(worst < 10 * cfg.dt);
}

TEST_CASE("evolve records") {
  const OscillatorParams p;
  IntegratorConfig cfg;
  cfg.record_stride = 4;
  auto ens = init_coherent({1.0, 0.0}, 8, 3);
  const auto before = std::vector<Complex>(ens.states().begin(), ens.states().end());
  const auto zero = evolve(ens, p, cfg, 0.0);
  CHECK(zero.size() == 1);
  CHECK(std::equal(before.begin(), before.end(), ens.states().begin()));

  const auto series = evolve(ens, p, cfg, 40 * cfg.dt);
  CHECK(series.size() == 11);
  CHECK(series.back().time == doctest::Approx(40 * cfg.dt));
  for (const auto& s : series) {
    CHECK(s.mean_q == 2 * s.mean_amp.real());
    CHECK(s.mean_p == 2 * s.mean_amp.imag());
  }
}

TEST_CASE("results do not depend on the worker count") {
  const OscillatorParams p;
  IntegratorConfig one;
  IntegratorConfig many = one;
  many.workers = 8;
  auto a = init_coherent({3.0, 0.0}, 5000, 77);
  auto b = init_coherent({3.0, 0.0}, 5000, 77);
  const auto sa = evolve(a, p, one, 2.0);
  const auto sb = evolve(b, p, many, 2.0);
  REQUIRE(sa.size() == sb.size());
  CHECK(std::equal(a.states().begin(), a.states().end(), b.states().begin()));
  bool same = true;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    same = same && sa[i].mean_amp == sb[i].mean_amp && sa[i].var_amp == sb[i].var_amp &&
           sa[i].mean_radius == sb[i].mean_radius;
  }
  CHECK(same);
}

TEST_CASE("steps_for") {
  CHECK(steps_for(180.0, 0.005) == 36000);
  CHECK(steps_for(0.0, 0.005) == 0);
  CHECK_THROWS_AS(steps_for(-1.0, 0.005), ArgumentError);
}
