#include "abpump/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "abpump/errors.hpp"

namespace abpump {

namespace {

void require_dim(const State& psi, std::size_t dim) {
  if (static_cast<std::size_t>(psi.size()) != dim)
    throw ConfigError("state dimension does not match the basis");
}

std::size_t nearest_index(const std::vector<double>& times, double t) {
  if (times.empty()) throw ConfigError("empty density trace");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  const auto k = static_cast<std::size_t>(it - times.begin());
  if (k > 0 && std::abs(times[k - 1] - t) <= std::abs(times[k] - t)) return k - 1;
  return k;
}

}  // namespace

std::vector<double> site_densities(const State& psi, const FockBasis& basis) {
  require_dim(psi, basis.size());
  std::vector<double> n(basis.sites(), 0.0);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double p = std::norm(psi[static_cast<Eigen::Index>(k)]);
    if (p == 0.0) continue;
    const Occupation& occ = basis.state(k);
    for (std::size_t j = 0; j < n.size(); ++j) n[j] += p * occ[j];
  }
  return n;
}

std::vector<double> species_densities(const State& psi, const TwoSpeciesBasis& basis, bool up) {
  require_dim(psi, basis.size());
  std::vector<double> n(basis.sites(), 0.0);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double p = std::norm(psi[static_cast<Eigen::Index>(k)]);
    if (p == 0.0) continue;
    const Occupation& occ =
        up ? basis.up().state(basis.up_index(k)) : basis.down().state(basis.down_index(k));
    for (std::size_t j = 0; j < n.size(); ++j) n[j] += p * occ[j];
  }
  return n;
}

std::vector<double> site_densities(const State& psi, const TwoSpeciesBasis& basis) {
  std::vector<double> n = species_densities(psi, basis, true);
  const std::vector<double> down = species_densities(psi, basis, false);
  for (std::size_t j = 0; j < n.size(); ++j) n[j] += down[j];
  return n;
}

std::vector<double> region_density(const DensityTrace& trace, const std::vector<std::size_t>& sites) {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const auto& row : trace.densities) {
    double s = 0.0;
    for (std::size_t j : sites) s += row.at(j);
    out.push_back(s);
  }
  return out;
}

std::size_t source_drain_path_length(std::size_t ring_sites) { return ring_sites / 2 + 2; }

double arrival_time(std::size_t ring_sites, Band band, double omega) {
  if (omega == 0.0) throw ConfigError("arrival time needs a non-zero driving frequency");
  const int chern = std::abs(band_preset(band).chern);
  const double period = 2.0 * std::numbers::pi / std::abs(omega);
  return static_cast<double>(source_drain_path_length(ring_sites)) / (3.0 * chern) * period;
}

int dominant_harmonic(const std::vector<double>& samples, const FluxPeriodOptions& options) {
  const std::size_t m = samples.size();
  if (m < 2) throw ConfigError("flux period needs at least two samples");
  int best = 0;
  double best_amp = 0.0;
  for (std::size_t h = 1; h <= m / 2; ++h) {
    std::complex<double> c = 0.0;
    for (std::size_t k = 0; k < m; ++k)
      c += samples[k] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(h * k) /
                                            static_cast<double>(m));
    const double scale = (2 * h == m) ? 1.0 : 2.0;
    const double amp = scale * std::abs(c) / static_cast<double>(m);
    if (amp > best_amp + 1e-12) {
      best_amp = amp;
      best = static_cast<int>(h);
    }
  }
  return best_amp < options.flat_amplitude ? 0 : best;
}

std::optional<double> flux_quantum(const TransmissionCurve& curve, const FluxPeriodOptions& options) {
  const std::vector<double>& flux = curve.flux;
  const std::size_t m = flux.size();
  if (m != curve.transmitted.size()) throw ConfigError("flux and transmission lengths differ");
  if (m < 2) throw ConfigError("flux period needs at least two samples");
  const double step = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (std::abs(flux[k] - static_cast<double>(k) * step) > 1e-9)
      throw ConfigError("flux period needs a uniform grid k/M on [0, 1)");
  }
  const int h = dominant_harmonic(curve.transmitted, options);
  if (h == 0) return std::nullopt;
  return 1.0 / h;
}

double centroid(const std::vector<double>& densities, const std::vector<int>& position) {
  if (densities.size() != position.size()) throw ConfigError("density and position lengths differ");
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j < densities.size(); ++j) {
    total += densities[j];
    weighted += densities[j] * position[j];
  }
  return total > 0.0 ? weighted / total : 0.0;
}

double pumped_displacement(const DensityTrace& trace, const std::vector<int>& position,
                           double period, double t0) {
  const std::size_t a = nearest_index(trace.times, t0);
  const std::size_t b = nearest_index(trace.times, t0 + period);
  return centroid(trace.densities[b], position) - centroid(trace.densities[a], position);
}

double centroid_velocity(const DensityTrace& trace, const std::vector<int>& position, double t_a,
                         double t_b) {
  double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double t = trace.times[k];
    if (t < t_a || t > t_b) continue;
    const double x = centroid(trace.densities[k], position);
    st += t;
    sx += x;
    stt += t * t;
    stx += t * x;
    ++n;
  }
  if (n < 2) throw ConfigError("centroid velocity needs at least two samples in the window");
  const double dn = static_cast<double>(n);
  return (dn * stx - st * sx) / (dn * stt - st * st);
}

std::optional<double> centroid_crossing(const DensityTrace& trace, const std::vector<int>& position,
                                        double level, bool rising, double t_from) {
  std::optional<double> prev_t;
  double prev_x = 0.0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double t = trace.times[k];
    if (t < t_from) continue;
    const double x = centroid(trace.densities[k], position);
    if (prev_t) {
      const bool crossed = rising ? (prev_x < level && x >= level) : (prev_x > level && x <= level);
      if (crossed) return *prev_t + (level - prev_x) / (x - prev_x) * (t - *prev_t);
    }
    prev_t = t;
    prev_x = x;
  }
  return std::nullopt;
}

Fidelity noon_fidelity(const State& psi, const FockBasis& basis, std::size_t u, std::size_t d) {
  require_dim(psi, basis.size());
  const auto n = static_cast<std::uint8_t>(basis.particles());
  Occupation left(basis.sites(), 0);
  Occupation right(basis.sites(), 0);
  left.at(u) = n;
  right.at(d) = n;
  const Complex a = psi[static_cast<Eigen::Index>(basis.index_of(left))];
  const Complex b = psi[static_cast<Eigen::Index>(basis.index_of(right))];
  return {std::norm(a + b) / 2.0, std::pow(std::abs(a) + std::abs(b), 2) / 2.0};
}

Fidelity bell_fidelity(const State& psi, const TwoSpeciesBasis& basis,
                       const std::vector<std::size_t>& upper, const std::vector<std::size_t>& lower) {
  require_dim(psi, basis.size());
  if (basis.up().particles() != 1 || basis.down().particles() != 1)
    throw ConfigError("Bell fidelity needs exactly one particle of each species");
  if (upper.size() != lower.size()) throw ConfigError("arm site lists must be mirror pairs");
  const std::size_t L = basis.sites();
  auto single = [L](std::size_t site) {
    Occupation occ(L, 0);
    occ.at(site) = 1;
    return occ;
  };
  double norm_a = 0.0, norm_b = 0.0;
  Complex overlap = 0.0;
  double raw = 0.0;
  for (std::size_t i = 0; i < upper.size(); ++i) {
    for (std::size_t k = 0; k < lower.size(); ++k) {
      const Complex a = psi[static_cast<Eigen::Index>(basis.index_of(single(upper[i]), single(lower[k])))];
      const Complex b = psi[static_cast<Eigen::Index>(basis.index_of(single(lower[k]), single(upper[i])))];
      norm_a += std::norm(a);
      norm_b += std::norm(b);
      overlap += std::conj(a) * b;
      raw += std::norm(a + b);
    }
  }
  return {raw / 2.0, (norm_a + norm_b + 2.0 * std::abs(overlap)) / 2.0};
}

void write_transmission_csv(std::ostream& os, const TransmissionCurve& curve) {
  os << "flux,transmitted,fitted_period\n";
  os << std::setprecision(12);
  for (std::size_t k = 0; k < curve.flux.size(); ++k) {
    os << curve.flux[k] << ',' << curve.transmitted[k] << ',';
    if (curve.period) os << *curve.period;
    os << '\n';
  }
}

void write_density_csv(std::ostream& os, const DensityTrace& trace) {
  os << "time";
  const std::size_t sites = trace.densities.empty() ? 0 : trace.densities.front().size();
  for (std::size_t j = 0; j < sites; ++j) os << ",n_site" << j;
  os << '\n' << std::setprecision(12);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    os << trace.times[k];
    for (double n : trace.densities[k]) os << ',' << n;
    os << '\n';
  }
}

}  // namespace abpump
