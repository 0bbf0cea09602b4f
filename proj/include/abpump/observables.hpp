#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "abpump/fock_basis.hpp"
#include "abpump/hamiltonian.hpp"
#include "abpump/lattice.hpp"

namespace abpump {

/// <n_j> for every site.
std::vector<double> site_densities(const State& psi, const FockBasis& basis);
/// Total density <n_up,j + n_down,j>.
std::vector<double> site_densities(const State& psi, const TwoSpeciesBasis& basis);
/// Per-species densities; `up == true` selects the up species.
std::vector<double> species_densities(const State& psi, const TwoSpeciesBasis& basis, bool up);

/// Densities sampled along a trajectory; one row per time.
struct DensityTrace {
  std::vector<double> times;
  std::vector<std::vector<double>> densities;

  void push(double t, std::vector<double> row) {
    times.push_back(t);
    densities.push_back(std::move(row));
  }
  std::size_t size() const { return times.size(); }
};

/// Summed density over `sites` at every recorded time.
std::vector<double> region_density(const DensityTrace& trace, const std::vector<std::size_t>& sites);

/// Hops from the initial source site to the first drain site: L_R/2 + 2.
std::size_t source_drain_path_length(std::size_t ring_sites);

/// Time at which the pumped packet reaches the drain: path / (3|C|) periods of 2 pi/|Omega|.
double arrival_time(std::size_t ring_sites, Band band, double omega);

/// Transmitted density against flux. `period` is empty when the curve is flat.
struct TransmissionCurve {
  std::vector<double> flux;
  std::vector<double> transmitted;
  std::optional<double> period;
};

struct FluxPeriodOptions {
  /// Cosine amplitude (particles) below which the curve counts as flat.
  double flat_amplitude = 0.025;
};

/// Dominant harmonic index of T(Phi) sampled uniformly on [0, 1); 0 when flat.
int dominant_harmonic(const std::vector<double>& samples, const FluxPeriodOptions& options = {});

/// 1 / dominant harmonic, or empty for a flat curve.
std::optional<double> flux_quantum(const TransmissionCurve& curve, const FluxPeriodOptions& options = {});

/// Density-weighted mean of `position` (normally the driving offsets, i.e.
/// the distance along the source-to-drain path).
double centroid(const std::vector<double>& densities, const std::vector<int>& position);

/// Centroid change over one period starting at the recorded time closest to `t0`.
double pumped_displacement(const DensityTrace& trace, const std::vector<int>& position,
                           double period, double t0 = 0.0);

/// Least-squares slope of the centroid over recorded times in [t_a, t_b].
double centroid_velocity(const DensityTrace& trace, const std::vector<int>& position, double t_a,
                         double t_b);

/**
 * First recorded time at or after `t_from` at which the centroid crosses
 * `level` (upwards when `rising`), linearly interpolated between samples.
 * Empty when no crossing is recorded.
 */
std::optional<double> centroid_crossing(const DensityTrace& trace, const std::vector<int>& position,
                                        double level, bool rising, double t_from = 0.0);

/// Overlap with an ideal target state, raw and maximized over the relative phase.
struct Fidelity {
  double raw = 0.0;
  double phase_max = 0.0;
};

/// Overlap with (|N at u> + |N at d>)/sqrt(2), all other sites empty.
Fidelity noon_fidelity(const State& psi, const FockBasis& basis, std::size_t u, std::size_t d);

/**
 * Overlap with (|up in U, down in D> + |down in U, up in D>)/sqrt(2) where
 * `upper[i]` and `lower[i]` are mirror sites. The spatial mode inside the
 * arms is optimized: F = ||A + e^{i theta} B||^2 / 2 with A, B the
 * amplitudes of the two arm assignments on mirror-matched sites. `raw` uses
 * theta = 0.
 */
Fidelity bell_fidelity(const State& psi, const TwoSpeciesBasis& basis,
                       const std::vector<std::size_t>& upper, const std::vector<std::size_t>& lower);

/// CSV: flux,transmitted,fitted_period (period empty when flat).
void write_transmission_csv(std::ostream& os, const TransmissionCurve& curve);
/// CSV: time,n_site0,...,n_siteK.
void write_density_csv(std::ostream& os, const DensityTrace& trace);

}  // namespace abpump
