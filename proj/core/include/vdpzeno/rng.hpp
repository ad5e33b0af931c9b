#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace vdp {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The output is a pure function of (key, counter): any draw of any stream can
/// be regenerated without replaying the ones before it. This is what makes
/// ensemble runs independent of how trajectories are spread over workers.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// SplitMix64 finalizer, used to derive seeds for independent repetitions.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Stream domains keep trajectory noise and ensemble-level control draws
/// (collapse indices) in disjoint counter subspaces of the same seed.
enum class StreamDomain : std::uint32_t { trajectory = 0, control = 1 };

/// One addressable random stream: (seed, domain, stream id) fixes the stream,
/// `position` counts draws consumed so far. Each draw uses one Philox block.
class RandomStream {
 public:
  RandomStream() = default;
  RandomStream(std::uint64_t seed, std::uint32_t stream_id,
               StreamDomain domain = StreamDomain::trajectory) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_id_(stream_id),
        domain_(static_cast<std::uint32_t>(domain)) {}

  [[nodiscard]] std::uint64_t position() const noexcept { return position_; }
  void seek(std::uint64_t position) noexcept { position_ = position; }

  /// Complex Gaussian with E[z] = 0, E[|z|^2] = 1, E[z^2] = 0
  /// (each quadrature has variance 1/2). Box-Muller on two 53-bit uniforms.
  std::complex<double> complex_normal() noexcept {
    const auto block = next_block();
    const double u1 = to_open_unit(block[0], block[1]);
    const double u2 = to_unit(block[2], block[3]);
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  /// Uniform double in [0, 1).
  double uniform() noexcept {
    const auto block = next_block();
    return to_unit(block[0], block[1]);
  }

  /// Uniform integer in [0, n). Multiply-shift reduction of a 64-bit draw;
  /// the bias is below n / 2^64.
  std::uint64_t uniform_index(std::uint64_t n) noexcept {
    const auto block = next_block();
    const std::uint64_t bits = (std::uint64_t{block[1]} << 32) | block[0];
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits) * n) >> 64);
  }

 private:
  Philox4x32::Counter next_block() noexcept {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(position_),
                                  static_cast<std::uint32_t>(position_ >> 32), stream_id_,
                                  domain_};
    ++position_;
    return Philox4x32::generate(ctr, key_);
  }

  static double to_unit(std::uint32_t lo, std::uint32_t hi) noexcept {
    const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
  }
  // (0, 1]: safe for log.
  static double to_open_unit(std::uint32_t lo, std::uint32_t hi) noexcept {
    const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  Philox4x32::Key key_{};
  std::uint32_t stream_id_ = 0;
  std::uint32_t domain_ = 0;
  std::uint64_t position_ = 0;
};

}  // namespace vdp
