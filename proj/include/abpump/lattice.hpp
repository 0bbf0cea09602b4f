#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace abpump {

/// Hopping bond. The term -J exp(i 2 pi phase) a^dag_from a_to is added
/// together with its Hermitian conjugate; `phase` is a fraction of 2 pi.
struct Bond {
  std::size_t from = 0;
  std::size_t to = 0;
  double phase = 0.0;
};

enum class SiteRole { source, ring, drain, chain };

/// How the total ring flux is distributed over ring bonds.
enum class FluxGauge {
  uniform,     ///< Phi / L_R on every ring bond
  single_bond  ///< Phi on the bond closing the loop, zero elsewhere
};

struct GeometrySpec {
  std::size_t ring_sites = 8;   ///< L_R, even and >= 4
  std::size_t source_sites = 1; ///< L_S
  std::size_t drain_sites = 1;  ///< L_D
  double flux = 0.0;            ///< Phi in units of the single-particle flux quantum
  FluxGauge gauge = FluxGauge::uniform;
};

/**
 * Sites, bonds and the period-3 driving offset of every site.
 *
 * For the ring-lead geometry, sites are ordered source lead (outermost first),
 * ring (junction site first, then counter-clockwise), drain lead (ring side
 * first). `driving_offset[j]` is the integer j_eff entering
 * V_j(t) = P0 cos(2 pi j_eff / 3 - phi0 - Omega t). It equals the graph
 * distance from the initial source site along the source-to-drain path, so
 * both ring arms carry identical offsets.
 */
struct LatticeGraph {
  std::size_t n_sites = 0;
  std::vector<Bond> bonds;
  std::vector<int> driving_offset;
  std::vector<SiteRole> roles;
  std::vector<std::size_t> ring_sites;   ///< in loop order, junction first
  std::vector<std::size_t> drain_lead;   ///< drain lead sites, ring side first
  std::optional<std::size_t> source_site; ///< source site adjacent to the ring
  std::optional<std::size_t> drain_site;  ///< drain site adjacent to the ring

  /// A, B or C from j_eff mod 3.
  char label(std::size_t site) const;
  std::size_t degree(std::size_t site) const;
  /// Oriented sum of bond phases around the ring loop (fraction of 2 pi, not reduced).
  double loop_phase() const;
  /// Ring sites strictly inside the arm running ring_sites[1], ring_sites[2], ...
  std::vector<std::size_t> upper_arm() const;
  /// Mirror images of upper_arm() under the source-drain axis, same order.
  std::vector<std::size_t> lower_arm() const;
};

LatticeGraph build_ring_lead(const GeometrySpec& spec);

/// Open chain with zero phases and offsets 0..L-1.
LatticeGraph build_chain(std::size_t length);

/**
 * Three-site junction: site 0 bonded to sites 1 and 2, no 1-2 bond.
 * Sites 1 and 2 share one offset; `hub_offset` and `arm_offset` pick the
 * pumping direction (hub 0 / arms 1 pumps hub -> arms).
 */
LatticeGraph build_fork(int hub_offset = 0, int arm_offset = 1);

const std::vector<int>& driving_offsets(const LatticeGraph& graph);

/// Site table (id, j_eff, label, role) then bond table (from, to, phase).
void write_graph(std::ostream& os, const LatticeGraph& graph);

std::string to_string(SiteRole role);

}  // namespace abpump
