#include "abpump/lattice.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "abpump/errors.hpp"

namespace abpump {

char LatticeGraph::label(std::size_t site) const {
  int m = ((driving_offset.at(site) % 3) + 3) % 3;
  return static_cast<char>('A' + m);
}

std::size_t LatticeGraph::degree(std::size_t site) const {
  return static_cast<std::size_t>(std::count_if(bonds.begin(), bonds.end(), [&](const Bond& b) {
    return b.from == site || b.to == site;
  }));
}

double LatticeGraph::loop_phase() const {
  if (ring_sites.empty()) return 0.0;
  const std::size_t L = ring_sites.size();
  double total = 0.0;
  for (std::size_t k = 0; k < L; ++k) {
    const std::size_t a = ring_sites[k];
    const std::size_t b = ring_sites[(k + 1) % L];
    for (const Bond& bond : bonds) {
      if (bond.from == a && bond.to == b) total += bond.phase;
      if (bond.from == b && bond.to == a) total -= bond.phase;
    }
  }
  return total;
}

std::vector<std::size_t> LatticeGraph::upper_arm() const {
  std::vector<std::size_t> arm;
  const std::size_t L = ring_sites.size();
  for (std::size_t k = 1; k < L / 2; ++k) arm.push_back(ring_sites[k]);
  return arm;
}

std::vector<std::size_t> LatticeGraph::lower_arm() const {
  std::vector<std::size_t> arm;
  const std::size_t L = ring_sites.size();
  for (std::size_t k = 1; k < L / 2; ++k) arm.push_back(ring_sites[L - k]);
  return arm;
}

LatticeGraph build_ring_lead(const GeometrySpec& spec) {
  const std::size_t LR = spec.ring_sites;
  if (LR % 2 != 0)
    throw ConfigError("ring length L_R=" + std::to_string(LR) +
                      " must be even: the drain attaches to ring site L_R/2");
  if (LR < 4) throw ConfigError("ring length L_R must be at least 4");
  if (spec.source_sites < 1 || spec.drain_sites < 1)
    throw ConfigError("source and drain leads need at least one site each");

  const std::size_t LS = spec.source_sites;
  const std::size_t LD = spec.drain_sites;
  LatticeGraph g;
  g.n_sites = LS + LR + LD;
  g.driving_offset.resize(g.n_sites);
  g.roles.resize(g.n_sites);

  for (std::size_t i = 0; i < LS; ++i) {
    g.driving_offset[i] = -static_cast<int>(LS - 1 - i);
    g.roles[i] = SiteRole::source;
    if (i + 1 < LS) g.bonds.push_back({i, i + 1, 0.0});
  }
  g.source_site = LS - 1;

  for (std::size_t k = 0; k < LR; ++k) {
    const std::size_t site = LS + k;
    g.ring_sites.push_back(site);
    g.roles[site] = SiteRole::ring;
    g.driving_offset[site] = 1 + static_cast<int>(std::min(k, LR - k));
  }
  g.bonds.push_back({LS - 1, LS, 0.0});
  for (std::size_t k = 0; k < LR; ++k) {
    double phase = 0.0;
    if (spec.gauge == FluxGauge::uniform) {
      phase = spec.flux / static_cast<double>(LR);
    } else if (k == LR - 1) {
      phase = spec.flux;
    }
    g.bonds.push_back({LS + k, LS + (k + 1) % LR, phase});
  }

  const int drain_base = static_cast<int>(LR / 2) + 2;
  for (std::size_t m = 0; m < LD; ++m) {
    const std::size_t site = LS + LR + m;
    g.roles[site] = SiteRole::drain;
    g.driving_offset[site] = drain_base + static_cast<int>(m);
    g.drain_lead.push_back(site);
    if (m == 0) {
      g.bonds.push_back({LS + LR / 2, site, 0.0});
    } else {
      g.bonds.push_back({site - 1, site, 0.0});
    }
  }
  g.drain_site = LS + LR;
  return g;
}

LatticeGraph build_chain(std::size_t length) {
  if (length < 2) throw ConfigError("chain needs at least two sites");
  LatticeGraph g;
  g.n_sites = length;
  for (std::size_t j = 0; j < length; ++j) {
    g.driving_offset.push_back(static_cast<int>(j));
    g.roles.push_back(SiteRole::chain);
    if (j + 1 < length) g.bonds.push_back({j, j + 1, 0.0});
  }
  g.source_site = 0;
  g.drain_site = length - 1;
  g.drain_lead = {length - 1};
  return g;
}

LatticeGraph build_fork(int hub_offset, int arm_offset) {
  LatticeGraph g;
  g.n_sites = 3;
  g.driving_offset = {hub_offset, arm_offset, arm_offset};
  g.roles = {SiteRole::chain, SiteRole::chain, SiteRole::chain};
  g.bonds = {{0, 1, 0.0}, {0, 2, 0.0}};
  g.source_site = 0;
  return g;
}

const std::vector<int>& driving_offsets(const LatticeGraph& graph) { return graph.driving_offset; }

std::string to_string(SiteRole role) {
  switch (role) {
    case SiteRole::source: return "source";
    case SiteRole::ring: return "ring";
    case SiteRole::drain: return "drain";
    case SiteRole::chain: return "chain";
  }
  return "unknown";
}

void write_graph(std::ostream& os, const LatticeGraph& graph) {
  os << "# sites\n# id j_eff label role\n";
  for (std::size_t j = 0; j < graph.n_sites; ++j) {
    os << j << ' ' << graph.driving_offset[j] << ' ' << graph.label(j) << ' '
       << to_string(graph.roles[j]) << '\n';
  }
  os << "# bonds\n# from to phase\n";
  for (const Bond& b : graph.bonds) {
    os << b.from << ' ' << b.to << ' ' << std::setprecision(12) << b.phase << '\n';
  }
}

}  // namespace abpump
