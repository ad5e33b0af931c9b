#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "vdpzeno/errors.hpp"
#include "vdpzeno/oscillator.hpp"
#include "vdpzeno/phase_space.hpp"
#include "vdpzeno/rng.hpp"

using namespace vdp;
constexpr double kPi = std::numbers::pi;

namespace {

// Best-Fisher rejection sampler for the von Mises distribution.
double von_mises(RandomStream& rng, double kappa) {
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  for (;;) {
    const double z = std::cos(kPi * rng.uniform());
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    const double u2 = rng.uniform();
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      return rng.uniform() < 0.5 ? -std::acos(f) : std::acos(f);
    }
  }
}

}  // namespace

TEST_CASE("all samples in one bin") {
  const std::vector<std::complex<double>> s(100, {0.5, -0.25});
  const auto hist = wigner_histogram(s, 0.1, 2.0);
  const auto d = hist.density();
  double peak = 0, rest = 0;
  for (double v : d) {
    if (v > 0) peak = v;
    rest += v > 0 ? 0 : v;
  }
  CHECK(peak == doctest::Approx(1.0 / (0.1 * 0.1)));
  CHECK(std::count_if(d.begin(), d.end(), [](double v) { return v > 0; }) == 1);
  CHECK(hist.mass() == 1.0);
  const auto n = normalized(hist);
  CHECK(*std::max_element(n.begin(), n.end()) == 1.0);
}

TEST_CASE("bin edges are half open and the origin is a bin center") {
  const auto hist = wigner_histogram(std::vector<std::complex<double>>{{0.0, 0.0}, {0.025, 0.0}, {0.0251, 0.0}}, 0.1, 1.0);
  CHECK(hist.bins == 21);
  CHECK(hist.center(10) == 0.0);
  // Q = 2 Re a: 0, 0.05 (upper edge of the central bin) and 0.0502 (next bin).
  CHECK(hist.counts[hist.index(10, 10)] == 2);
  CHECK(hist.counts[hist.index(10, 11)] == 1);
}

TEST_CASE("out-of-range samples are counted, not clamped") {
  const std::vector<std::complex<double>> s{{0.1, 0.1}, {10.0, 0.0}, {0.0, -9.0}, {0.2, 0.0}};
  const auto hist = wigner_histogram(s, 0.1, 1.0);
  CHECK(hist.dropped == 2);
  CHECK(hist.n_total == 4);
  std::uint64_t kept = 0;
  for (auto c : hist.counts) kept += c;
  CHECK(kept == 2);
  double integral = 0;
  for (double v : hist.density()) integral += v * hist.h * hist.h;
  CHECK(integral + static_cast<double>(hist.dropped) / hist.n_total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(wigner_histogram(s, 0.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(wigner_histogram(s, -0.1, 1.0), ArgumentError);
}

TEST_CASE("coherent cloud histogram") {
  const double r = limit_cycle_radius({1.0, 0.1, 0.005});
  auto ens = init_coherent({r / 2, 0.0}, 1000000, 2);
  const double h = 0.1;
  const auto hist = wigner_histogram(ens.states(), h, 1.5 * r);
  const auto d = hist.density();
  const auto it = std::max_element(d.begin(), d.end());
  const auto idx = static_cast<std::size_t>(it - d.begin());
  const double q = hist.center(idx % hist.bins);
  const double p = hist.center(idx / hist.bins);
  CHECK(std::abs(q - r) <= 2 * h);
  CHECK(std::abs(p) <= 2 * h);
  // Gaussian of unit variance per quadrature: peak 1/(2 pi).
  CHECK(*it == doctest::Approx(1.0 / (2 * kPi)).epsilon(0.1));
  double vq = 0, mass = 0;
  for (std::size_t ip = 0; ip < hist.bins; ++ip) {
    for (std::size_t iq = 0; iq < hist.bins; ++iq) {
      const double w = d[hist.index(ip, iq)] * h * h;
      vq += w * std::pow(hist.center(iq) - r, 2);
      mass += w;
    }
  }
  CHECK(mass == doctest::Approx(hist.mass()));
  CHECK(vq / mass == doctest::Approx(1.0 + h * h / 12).epsilon(0.01));
}

TEST_CASE("refinement keeps coarse densities") {
  auto ens = init_coherent({1.0, 0.0}, 400000, 6);
  auto fine_ens = init_coherent({1.0, 0.0}, 800000, 7);
  const auto coarse = wigner_histogram(ens.states(), 0.4, 3.0);
  const auto fine = wigner_histogram(fine_ens.states(), 0.2, 3.0);
  // Fine bins pair up exactly only around the shared centers: compare the central coarse bin
  // to the average over a 0.4 x 0.4 box of fine bins centered at the same point.
  const auto dc = coarse.density();
  const auto df = fine.density();
  const std::size_t cq = coarse.bins / 2 + 5;  // Q = 2.0
  const std::size_t cp = coarse.bins / 2;
  const double c_val = dc[coarse.index(cp, cq)];
  const std::size_t fq = fine.bins / 2 + 10, fp = fine.bins / 2;
  // Weights of fine bins fully or half inside the coarse bin.
  double f_val = 0;
  for (int dp = -1; dp <= 1; ++dp) {
    for (int dq = -1; dq <= 1; ++dq) {
      const double w = (dp == 0 ? 1.0 : 0.5) * (dq == 0 ? 1.0 : 0.5);
      f_val += w * df[fine.index(fp + dp, fq + dq)];
    }
  }
  f_val /= 4.0;
  CHECK(f_val == doctest::Approx(c_val).epsilon(0.03));
}

TEST_CASE("normalization errors") {
  const std::vector<double> zeros(9, 0.0);
  CHECK_THROWS_AS(normalized(std::span<const double>(zeros)), StateError);
  const std::vector<double> g{0.1, 0.4, 0.2};
  const auto n = normalized(std::span<const double>(g));
  CHECK(n[1] == 1.0);
  CHECK(std::max_element(n.begin(), n.end()) - n.begin() == 1);
}

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(-kPi / 2) == doctest::Approx(1.5 * kPi));
  CHECK(wrap_angle(7 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(std::nextafter(2 * kPi, 0.0)) < 2 * kPi);
  CHECK(wrap_angle(-1e-20) < 2 * kPi);
}

TEST_CASE("phase distribution basics") {
  const std::vector<double> same(1000, 1.0);
  const auto spike = phase_distribution(std::span<const double>(same), 32);
  CHECK(*std::max_element(spike.density.begin(), spike.density.end()) == doctest::Approx(32 / (2 * kPi)));
  CHECK(spike.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(circular_spread(spike) < 1e-6);

  const std::vector<double> none;
  CHECK_THROWS_AS(phase_distribution(std::span<const double>(none), 64), StateError);
  CHECK_THROWS_AS(phase_distribution(std::span<const double>(same), 4), ArgumentError);

  PhaseDistribution d;
  d.density.assign(64, 0.0);
  CHECK(d.bin_of(0.0) == 0);
  CHECK(d.bin_of(-0.01) == 0);
  CHECK(d.bin_of(kPi) == 32);
  CHECK(d.bin_center(32) == doctest::Approx(kPi));
}

TEST_CASE("uniform angles") {
  RandomStream rng(12, 0);
  std::vector<double> angles(1000000);
  for (auto& a : angles) a = 2 * kPi * rng.uniform();
  const auto d = phase_distribution(std::span<const double>(angles), 64);
  const double expect = 1 / (2 * kPi);
  const double p = 1.0 / 64;
  const double se = std::sqrt(p * (1 - p) / angles.size()) / d.bin_width();
  for (double v : d.density) CHECK(std::abs(v - expect) < 4 * se);
  CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(circular_spread(d) > 3.0);

  PhaseDistribution flat;
  flat.density.assign(64, expect);
  CHECK(circular_spread(flat) == kMaxCircularSpread);
}

TEST_CASE("von Mises resultant length") {
  RandomStream rng(31, 0);
  const double kappa = 4.0;
  std::vector<double> angles(400000);
  for (auto& a : angles) a = 1.0 + von_mises(rng, kappa);
  const auto d = phase_distribution(std::span<const double>(angles), 64);
  const double r_exact = std::cyl_bessel_i(1.0, kappa) / std::cyl_bessel_i(0.0, kappa);
  CHECK(mean_resultant_length(d) == doctest::Approx(r_exact).epsilon(0.02));
  CHECK(circular_spread(d) == doctest::Approx(std::sqrt(-2 * std::log(r_exact))).epsilon(0.02));
}

TEST_CASE("averaging distributions") {
  PhaseDistribution a, b;
  a.density.assign(16, 0.0);
  b.density.assign(16, 0.0);
  a.density[0] = 16 / (2 * kPi);
  b.density[8] = 16 / (2 * kPi);
  const std::vector<PhaseDistribution> both{a, b};
  const auto m = average(std::span<const PhaseDistribution>(both));
  CHECK(m.density[0] == doctest::Approx(8 / (2 * kPi)));
  CHECK(m.total_mass() == doctest::Approx(1.0));
  PhaseDistribution c;
  c.density.assign(8, 0.0);
  const std::vector<PhaseDistribution> mixed{a, c};
  CHECK_THROWS_AS(average(std::span<const PhaseDistribution>(mixed)), ArgumentError);
}

TEST_CASE("grid CSV round trip") {
  std::vector<double> values(9);
  for (std::size_t i = 0; i < 9; ++i) values[i] = 0.1 * static_cast<double>(i) - 0.3;
  GridMeta meta{"wigner-fock", 0.25, 0.25, 0, 0, 12.5, false};
  std::stringstream ss;
  write_grid_csv(ss, meta, 3, values);
  const auto text = ss.str();
  CHECK(text.rfind("# kind=wigner-fock h=0.25 extent=0.25 bins=3", 0) == 0);
  const auto g = read_grid_csv(ss);
  CHECK(g.bins == 3);
  CHECK(g.meta.kind == "wigner-fock");
  CHECK(g.meta.time == 12.5);
  CHECK(g.values == values);
  CHECK(g.q[0] == -0.25);
  CHECK(g.p[0] == -0.25);
  CHECK(g.q[1] == 0.0);
  CHECK(g.p[3] == 0.0);

  std::stringstream bad("q,p,value\n");
  CHECK_THROWS_AS(read_grid_csv(bad), ArgumentError);
  CHECK_THROWS_AS(write_grid_csv(ss, meta, 4, values), ArgumentError);
}
