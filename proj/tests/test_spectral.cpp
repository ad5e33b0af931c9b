#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vdpzeno/errors.hpp"
#include "vdpzeno/rng.hpp"
#include "vdpzeno/spectral.hpp"

using namespace vdp;
using namespace vdp::spectral;
constexpr double kPi = std::numbers::pi;

TEST_CASE("constant series") {
  const std::vector<double> x(400, 2.5);
  const auto s = fourier_q(x, 0.1);
  CHECK(s.argmax() == 0);
  CHECK(s.magnitudes[0] == doctest::Approx(2.5 * 40.0 / std::sqrt(2 * kPi)));
  for (std::size_t m = 1; m < s.magnitudes.size(); ++m) CHECK(s.magnitudes[m] < 1e-10);
  CHECK(s.frequencies.back() == doctest::Approx(kPi / 0.1));
}

TEST_CASE("cosine on the grid") {
  const double dt = 0.05, t = 200.0, amp = 1.7;
  const auto n = static_cast<std::size_t>(t / dt);
  const double omega0 = 64 * 2 * kPi / t;
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = amp * std::cos(omega0 * dt * static_cast<double>(k));
  const auto s = fourier_q(x, dt, 4.0);
  const auto peak = s.argmax();
  CHECK(peak == 64);
  CHECK(s.frequencies[peak] == doctest::Approx(omega0));
  CHECK(s.magnitudes[peak] == doctest::Approx(amp * t / (2 * std::sqrt(2 * kPi))).epsilon(1e-9));
  for (std::size_t m = 0; m < s.magnitudes.size(); ++m) {
    if (m != peak) CHECK(s.magnitudes[m] < 0.01 * s.magnitudes[peak]);
  }
  CHECK(s.frequencies.back() <= 4.0);
}

TEST_CASE("peak normalized by the limit cycle radius") {
  const OscillatorParams p{1.0, 0.1, 0.005};
  const double r = limit_cycle_radius(p);
  const double dt = 0.05, t = 100 * 2 * kPi;
  const auto n = static_cast<std::size_t>(std::llround(t / dt));
  std::vector<double> x(n), zero(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) x[k] = r * std::cos(p.omega_m * dt * static_cast<double>(k));
  const double len = static_cast<double>(n) * dt;
  CHECK(peak_normalized(fourier_q(x, dt, 3.0), p) == doctest::Approx(len / (2 * std::sqrt(2 * kPi))).epsilon(1e-3));
  CHECK(peak_normalized(fourier_q(zero, dt, 3.0), p) == 0.0);
}

TEST_CASE("one-sided Parseval identity") {
  RandomStream rng(4, 0);
  for (std::size_t n : {512, 513}) {
    std::vector<double> x(n);
    for (auto& v : x) v = rng.complex_normal().real() + 0.3;
    const double dt = 0.1;
    const auto s = fourier_q(x, dt);
    double spectral = 0;
    for (std::size_t m = 0; m < s.magnitudes.size(); ++m) {
      const bool edge = m == 0 || (n % 2 == 0 && m == n / 2);
      spectral += (edge ? 1.0 : 2.0) * s.magnitudes[m] * s.magnitudes[m];
    }
    spectral *= s.d_omega;
    double temporal = 0;
    for (double v : x) temporal += v * v * dt;
    CHECK(spectral == doctest::Approx(temporal).epsilon(1e-6));
  }
}

TEST_CASE("triangle inequality") {
  RandomStream rng(8, 0);
  std::vector<double> x(300), y(300), z(300);
  const double a = 0.7, b = 2.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = rng.complex_normal().real();
    y[k] = std::sin(0.3 * static_cast<double>(k));
    z[k] = a * x[k] + b * y[k];
  }
  const auto sx = fourier_q(x, 0.2), sy = fourier_q(y, 0.2), sz = fourier_q(z, 0.2);
  for (std::size_t m = 0; m < sz.magnitudes.size(); ++m) {
    CHECK(sz.magnitudes[m] <= a * sx.magnitudes[m] + b * sy.magnitudes[m] + 1e-12);
  }
}

TEST_CASE("timed series must be uniform") {
  const std::vector<double> t{0.0, 0.1, 0.2, 0.35}, v{1, 2, 3, 4};
  CHECK_THROWS_AS(fourier_q(t, v), ArgumentError);
  const std::vector<double> tu{0.0, 0.1, 0.2, 0.3};
  CHECK(fourier_q(tu, v).d_omega == doctest::Approx(2 * kPi / 0.4));
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(fourier_q(one, 0.1), ArgumentError);
  CHECK_THROWS_AS(fourier_q(v, 0.0), ArgumentError);
}

TEST_CASE("critical interval") {
  const auto c = critical_interval({1.0, 0.1, 0.005}, 600.0);
  CHECK(c.delta_t_c == doctest::Approx(2.8417).epsilon(1e-4));
  CHECK(c.n_c == doctest::Approx(211.1).epsilon(5e-4));
  CHECK(critical_interval({1.0, 0.1, 0.0}, 600.0).delta_t_c == 0.0);
  CHECK(critical_interval({1.0, 0.1, 1e-12}, 600.0).delta_t_c < 1e-4);
  CHECK_THROWS_AS(critical_interval({1.0, 0.0, 0.0}, 600.0), DomainError);
  CHECK_THROWS_AS(critical_interval({0.0, 0.1, 0.005}, 600.0), DomainError);

  for (double k1 : {0.01, 0.1, 1.0}) {
    double prev = 0;
    for (double k2 : {1e-4, 1e-3, 1e-2, 1e-1}) {
      const double d = critical_interval({1.0, k1, k2}, 1.0).delta_t_c;
      CHECK(d > prev);
      prev = d;
    }
  }
  for (double k2 : {1e-3, 1e-2}) {
    double prev = 1e300;
    for (double k1 : {0.01, 0.1, 1.0}) {
      const double d = critical_interval({1.0, k1, k2}, 1.0).delta_t_c;
      CHECK(d < prev);
      prev = d;
    }
  }
}

TEST_CASE("threshold ratio inverts the critical interval") {
  CHECK(threshold_ratio(0.3) == doctest::Approx(5.07e-4).epsilon(1e-3));
  for (double ratio : {1e-4, 5e-4, 3e-3}) {
    const double dt_c = critical_interval({1.0, 0.1, 0.1 * ratio}, 1.0).delta_t_c;
    CHECK(threshold_ratio(dt_c) == doctest::Approx(ratio).epsilon(1e-10));
  }
  CHECK_THROWS_AS(threshold_ratio(0.0), DomainError);
  CHECK_THROWS_AS(threshold_ratio(3 * kPi), DomainError);
}

TEST_CASE("averaging spectra") {
  SpectralSeries a{1.0, {0, 1, 2}, {1, 2, 3}}, b{1.0, {0, 1, 2}, {3, 2, 1}};
  const std::vector<SpectralSeries> both{a, b};
  const auto m = average(std::span<const SpectralSeries>(both));
  CHECK(m.magnitudes == std::vector<double>{2, 2, 2});
  CHECK(m.nearest_index(1.4) == 1);
  CHECK(m.nearest_index(-3.0) == 0);
  CHECK(m.nearest_index(99.0) == 2);
  CHECK_THROWS_AS(static_cast<void>(m.argmax(5.0, 6.0)), StateError);
}

TEST_CASE("ensemble spectrum of a short run peaks at the oscillation frequency") {
  const OscillatorParams p;
  IntegratorConfig cfg;
  const std::vector<std::uint64_t> ns{0};
  const auto rows = zeno_spectrum(p, cfg, 200, 20 * 2 * kPi, ns, 3.0);
  REQUIRE(rows.size() == 1);
  const auto& s = rows[0].spectrum;
  CHECK(s.d_omega == doctest::Approx(2 * kPi / (20 * 2 * kPi)).epsilon(1e-3));
  CHECK(s.frequencies[s.argmax(0.5)] == doctest::Approx(1.0).epsilon(0.06));
}
