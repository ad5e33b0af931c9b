#include "vdpzeno/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "vdpzeno/errors.hpp"
#include "vdpzeno/io.hpp"

namespace vdp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Index of the (lo, hi] bin holding x, or -1 when outside.
long long half_open_bin(double x, double first_lower_edge, double h, std::size_t bins) {
  const double u = (x - first_lower_edge) / h;
  const auto i = static_cast<long long>(std::ceil(u)) - 1;
  if (i < 0 || i >= static_cast<long long>(bins)) return -1;
  return i;
}

}  // namespace

std::vector<double> WignerHistogram::density() const {
  std::vector<double> out(counts.size(), 0.0);
  if (n_total == 0) return out;
  const double scale = 1.0 / (static_cast<double>(n_total) * h * h);
  std::transform(counts.begin(), counts.end(), out.begin(),
                 [scale](std::uint64_t c) { return static_cast<double>(c) * scale; });
  return out;
}

double WignerHistogram::mass() const {
  if (n_total == 0) return 0.0;
  return static_cast<double>(n_total - dropped) / static_cast<double>(n_total);
}

WignerHistogram wigner_histogram(std::span<const std::complex<double>> samples, double h, double extent) {
  if (!(h > 0.0)) throw ArgumentError("histogram bin side h must be positive");
  if (!(extent > 0.0)) throw ArgumentError("histogram extent must be positive");

  WignerHistogram hist;
  hist.h = h;
  hist.extent = extent;
  const auto half = static_cast<std::size_t>(std::ceil(extent / h - 1e-9));
  hist.bins = 2 * half + 1;
  hist.counts.assign(hist.bins * hist.bins, 0);
  hist.n_total = samples.size();

  const double lower_edge = hist.center(0) - 0.5 * h;
  for (const auto& a : samples) {
    const long long iq = half_open_bin(2.0 * a.real(), lower_edge, h, hist.bins);
    const long long ip = half_open_bin(2.0 * a.imag(), lower_edge, h, hist.bins);
    if (iq < 0 || ip < 0) {
      ++hist.dropped;
      continue;
    }
    ++hist.counts[hist.index(static_cast<std::size_t>(ip), static_cast<std::size_t>(iq))];
  }
  return hist;
}

std::vector<double> normalized(std::span<const double> grid) {
  const auto it = std::max_element(grid.begin(), grid.end());
  if (it == grid.end() || !(*it > 0.0)) throw StateError("cannot normalize a grid without positive entries");
  const double inv = 1.0 / *it;
  std::vector<double> out(grid.begin(), grid.end());
  for (auto& v : out) v *= inv;
  return out;
}

std::vector<double> normalized(const WignerHistogram& hist) {
  const auto d = hist.density();
  return normalized(std::span<const double>(d));
}

double wrap_angle(double theta) noexcept {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;  // fmod of values just below a multiple of 2pi
  return w;
}

double PhaseDistribution::bin_width() const noexcept { return kTwoPi / static_cast<double>(density.size()); }

double PhaseDistribution::bin_center(std::size_t i) const noexcept { return static_cast<double>(i) * bin_width(); }

std::size_t PhaseDistribution::bin_of(double theta) const noexcept {
  const std::size_t n = density.size();
  const double shifted = wrap_angle(theta + 0.5 * bin_width());
  auto i = static_cast<std::size_t>(shifted / bin_width());
  return i >= n ? n - 1 : i;
}

double PhaseDistribution::total_mass() const noexcept {
  double s = 0.0;
  for (double d : density) s += d;
  return s * bin_width();
}

PhaseDistribution phase_distribution(std::span<const double> angles, std::size_t n_bins) {
  if (n_bins < 8) throw ArgumentError("phase distribution needs at least 8 bins");
  if (angles.empty()) throw StateError("phase distribution of an empty sample");
  PhaseDistribution dist;
  dist.density.assign(n_bins, 0.0);
  std::vector<std::uint64_t> counts(n_bins, 0);
  for (double theta : angles) ++counts[dist.bin_of(theta)];
  const double scale = 1.0 / (static_cast<double>(angles.size()) * dist.bin_width());
  for (std::size_t i = 0; i < n_bins; ++i) dist.density[i] = static_cast<double>(counts[i]) * scale;
  return dist;
}

PhaseDistribution phase_distribution(std::span<const std::complex<double>> samples, std::size_t n_bins) {
  std::vector<double> angles(samples.size());
  std::transform(samples.begin(), samples.end(), angles.begin(), [](const auto& a) { return std::arg(a); });
  return phase_distribution(std::span<const double>(angles), n_bins);
}

PhaseDistribution average(std::span<const PhaseDistribution> dists) {
  if (dists.empty()) throw StateError("average of no distributions");
  PhaseDistribution out;
  out.density.assign(dists.front().n_bins(), 0.0);
  for (const auto& d : dists) {
    if (d.n_bins() != out.n_bins()) throw ArgumentError("distributions differ in bin count");
    for (std::size_t i = 0; i < d.n_bins(); ++i) out.density[i] += d.density[i];
  }
  const double inv = 1.0 / static_cast<double>(dists.size());
  for (auto& v : out.density) v *= inv;
  return out;
}

double mean_resultant_length(const PhaseDistribution& dist) {
  std::complex<double> r{};
  const double w = dist.bin_width();
  for (std::size_t i = 0; i < dist.n_bins(); ++i) r += dist.density[i] * w * std::polar(1.0, dist.bin_center(i));
  return std::abs(r);
}

double circular_spread(const PhaseDistribution& dist) {
  const double r = std::min(1.0, mean_resultant_length(dist));
  if (r <= 1e-12) return kMaxCircularSpread;
  return std::min(kMaxCircularSpread, std::sqrt(-2.0 * std::log(r)));
}

void write_grid_csv(std::ostream& out, const GridMeta& meta, std::size_t bins, std::span<const double> values) {
  if (values.size() != bins * bins) throw ArgumentError("grid size does not match bins^2");
  out << "# kind=" << meta.kind << " h=" << io::number(meta.h) << " extent=" << io::number(meta.extent)
      << " bins=" << bins << " n_total=" << meta.n_total << " dropped=" << meta.dropped
      << " time=" << io::number(meta.time) << " normalized=" << (meta.normalized ? 1 : 0) << '\n';
  out << "q,p,value\n";
  const double half = 0.5 * static_cast<double>(bins - 1);
  for (std::size_t ip = 0; ip < bins; ++ip) {
    const double p = (static_cast<double>(ip) - half) * meta.h;
    for (std::size_t iq = 0; iq < bins; ++iq) {
      const double q = (static_cast<double>(iq) - half) * meta.h;
      out << io::number(q) << ',' << io::number(p) << ',' << io::number(values[ip * bins + iq]) << '\n';
    }
  }
}

GridCsv read_grid_csv(std::istream& in) {
  GridCsv grid;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw ArgumentError("grid CSV: missing metadata line");
  std::istringstream meta(line.substr(2));
  std::string kv;
  while (meta >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ArgumentError("grid CSV: bad metadata field " + kv);
    const auto key = kv.substr(0, eq);
    const auto val = kv.substr(eq + 1);
    if (key == "kind") grid.meta.kind = val;
    else if (key == "h") grid.meta.h = std::stod(val);
    else if (key == "extent") grid.meta.extent = std::stod(val);
    else if (key == "bins") grid.bins = std::stoul(val);
    else if (key == "n_total") grid.meta.n_total = std::stoull(val);
    else if (key == "dropped") grid.meta.dropped = std::stoull(val);
    else if (key == "time") grid.meta.time = std::stod(val);
    else if (key == "normalized") grid.meta.normalized = val == "1";
  }
  if (!std::getline(in, line) || line != "q,p,value") throw ArgumentError("grid CSV: missing column header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string q, p, v;
    if (!std::getline(row, q, ',') || !std::getline(row, p, ',') || !std::getline(row, v)) {
      throw ArgumentError("grid CSV: malformed row");
    }
    grid.q.push_back(std::stod(q));
    grid.p.push_back(std::stod(p));
    grid.values.push_back(std::stod(v));
  }
  if (grid.values.size() != grid.bins * grid.bins) throw ArgumentError("grid CSV: row count does not match bins");
  return grid;
}

}  // namespace vdp
