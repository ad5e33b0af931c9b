#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace vdp {

/// Square-binned phase-space density of a set of samples.
///
/// Bins are (c - h/2, c + h/2] around centers c = (i - (bins-1)/2) h in both
/// Q and P, so the origin is always a bin center. Counts are stored row-major
/// with P as the row index.
struct WignerHistogram {
  double h = 0.1;
  double extent = 0.0;
  std::size_t bins = 0;  // per axis
  std::vector<std::uint64_t> counts;
  std::uint64_t n_total = 0;
  std::uint64_t dropped = 0;  // samples outside the grid

  [[nodiscard]] double center(std::size_t i) const noexcept {
    return (static_cast<double>(i) - 0.5 * static_cast<double>(bins - 1)) * h;
  }
  [[nodiscard]] std::size_t index(std::size_t ip, std::size_t iq) const noexcept { return ip * bins + iq; }
  /// counts / (N h^2) for every bin, row-major.
  [[nodiscard]] std::vector<double> density() const;
  /// Integral of the density over the grid (1 minus the dropped fraction).
  [[nodiscard]] double mass() const;
};

/// Bins Q = 2 Re a, P = 2 Im a of every sample. Throws ArgumentError for h <= 0
/// or a non-positive extent.
WignerHistogram wigner_histogram(std::span<const std::complex<double>> samples, double h, double extent);

/// Scales a grid so that its maximum is 1. Throws StateError when no entry is positive.
std::vector<double> normalized(std::span<const double> grid);
std::vector<double> normalized(const WignerHistogram& hist);

/// Circular density over n_bins bins. Bin i is centered at i * 2pi / n_bins, so
/// theta = 0 and (for even n_bins) theta = pi are bin centers.
struct PhaseDistribution {
  std::vector<double> density;  // per radian

  [[nodiscard]] std::size_t n_bins() const noexcept { return density.size(); }
  [[nodiscard]] double bin_width() const noexcept;
  [[nodiscard]] double bin_center(std::size_t i) const noexcept;
  [[nodiscard]] std::size_t bin_of(double theta) const noexcept;
  /// Density of the bin that contains theta.
  [[nodiscard]] double at(double theta) const noexcept { return density[bin_of(theta)]; }
  /// sum(density) * bin_width; 1 for a normalized distribution.
  [[nodiscard]] double total_mass() const noexcept;
};

/// Wraps an angle into [0, 2pi).
double wrap_angle(double theta) noexcept;

/// Histogram of angles (any real values, wrapped). Throws ArgumentError for
/// n_bins < 8 and StateError for an empty input.
PhaseDistribution phase_distribution(std::span<const double> angles, std::size_t n_bins);
/// Same, using arg(a) of each amplitude.
PhaseDistribution phase_distribution(std::span<const std::complex<double>> samples, std::size_t n_bins);

/// Pointwise mean of equally sized distributions.
PhaseDistribution average(std::span<const PhaseDistribution> dists);

/// Largest value circular_spread returns; reached when the mean resultant
/// length vanishes (uniform density).
inline constexpr double kMaxCircularSpread = 7.433756729740644;  // sqrt(-2 ln 1e-12)

/// Mean resultant length R of the density.
double mean_resultant_length(const PhaseDistribution& dist);
/// Circular standard deviation sqrt(-2 ln R), capped at kMaxCircularSpread.
double circular_spread(const PhaseDistribution& dist);

/// Metadata written into the first line of grid CSV files.
struct GridMeta {
  std::string kind;  // "wigner-histogram", "wigner-fock", ...
  double h = 0.0;
  double extent = 0.0;
  std::uint64_t n_total = 0;
  std::uint64_t dropped = 0;
  double time = 0.0;
  bool normalized = false;
};

/// Row-major grid CSV: a `# key=value ...` metadata line, a `q,p,value`
/// header, then one line per bin with P as the outer loop.
void write_grid_csv(std::ostream& out, const GridMeta& meta, std::size_t bins, std::span<const double> values);

struct GridCsv {
  GridMeta meta;
  std::size_t bins = 0;
  std::vector<double> q, p, values;
};
/// Parses the format written by write_grid_csv. Throws ArgumentError on malformed input.
GridCsv read_grid_csv(std::istream& in);

}  // namespace vdp
