#include <doctest.h>

#include <cmath>
#include <sstream>

#include "abpump/errors.hpp"
#include "abpump/lattice.hpp"

using namespace abpump;

TEST_CASE("ring-lead: L_R=6 layout") {
  const LatticeGraph g = build_ring_lead({6, 1, 1, 0.0});
  CHECK(g.n_sites == 8);
  CHECK(g.bonds.size() == 8);
  for (const Bond& b : g.bonds) CHECK(b.phase == 0.0);
  CHECK(g.source_site == 0u);
  CHECK(g.drain_site == 7u);
  CHECK(g.roles[0] == SiteRole::source);
  CHECK(g.roles[7] == SiteRole::drain);
  // source offset 0, path distance along both arms, drain past the opposite site
  CHECK(g.driving_offset == std::vector<int>{0, 1, 2, 3, 4, 3, 2, 5});
  CHECK(g.label(0) == 'A');
  CHECK(g.label(1) == 'B');
  CHECK(g.label(2) == 'C');
}

TEST_CASE("ring-lead: flux bookkeeping") {
  const LatticeGraph half = build_ring_lead({6, 1, 1, 0.5});
  CHECK(half.loop_phase() == doctest::Approx(0.5));
  const LatticeGraph quarter = build_ring_lead({8, 1, 1, 0.25});
  CHECK(quarter.loop_phase() == doctest::Approx(0.25));
  for (const Bond& b : quarter.bonds) {
    const bool ring = quarter.roles[b.from] == SiteRole::ring && quarter.roles[b.to] == SiteRole::ring;
    CHECK(b.phase == doctest::Approx(ring ? 0.25 / 8 : 0.0));
  }
  const LatticeGraph single = build_ring_lead({8, 1, 1, 0.25, FluxGauge::single_bond});
  CHECK(single.loop_phase() == doctest::Approx(0.25));
  int nonzero = 0;
  for (const Bond& b : single.bonds) nonzero += b.phase != 0.0;
  CHECK(nonzero == 1);
}

TEST_CASE("ring-lead: mirror symmetry and degrees") {
  for (std::size_t lr : {4u, 6u, 8u, 10u}) {
    const LatticeGraph g = build_ring_lead({lr, 2, 2, 0.3});
    const auto up = g.upper_arm();
    const auto down = g.lower_arm();
    REQUIRE(up.size() == down.size());
    REQUIRE(up.size() == lr / 2 - 1);
    for (std::size_t i = 0; i < up.size(); ++i)
      CHECK(g.driving_offset[up[i]] == g.driving_offset[down[i]]);
    CHECK(g.degree(g.ring_sites.front()) == 3);
    CHECK(g.degree(g.ring_sites[lr / 2]) == 3);
    for (std::size_t j = 0; j < g.n_sites; ++j)
      if (g.roles[j] != SiteRole::ring) CHECK(g.degree(j) <= 2);
    // drain offset continues the path: source at 0, drain at L_R/2 + 2
    CHECK(g.driving_offset[*g.drain_site] == static_cast<int>(lr / 2 + 2));
    CHECK(g.driving_offset[*g.source_site] == 0);
  }
}

TEST_CASE("ring-lead: invalid rings") {
  CHECK_THROWS_AS(build_ring_lead({7, 1, 1, 0.0}), ConfigError);
  CHECK_THROWS_AS(build_ring_lead({2, 1, 1, 0.0}), ConfigError);
  CHECK_THROWS_AS(build_ring_lead({8, 0, 1, 0.0}), ConfigError);
  try {
    build_ring_lead({5, 1, 1, 0.0});
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("drain") != std::string::npos);
  }
}

TEST_CASE("chain and fork") {
  CHECK(build_chain(2).bonds.size() == 1);
  const LatticeGraph three = build_chain(3);
  CHECK(three.bonds.size() == 2);
  CHECK(three.driving_offset == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(build_chain(1), ConfigError);

  const LatticeGraph fork = build_fork();
  CHECK(fork.n_sites == 3);
  CHECK(fork.degree(0) == 2);
  CHECK(fork.degree(1) == 1);
  CHECK(fork.degree(2) == 1);
  for (const Bond& b : fork.bonds) CHECK(b.from == 0);
  CHECK(fork.driving_offset[1] == fork.driving_offset[2]);
}

TEST_CASE("graph dump") {
  std::ostringstream os;
  write_graph(os, build_ring_lead({4, 1, 1, 0.0}));
  const std::string text = os.str();
  CHECK(text.find("# sites") != std::string::npos);
  CHECK(text.find("# bonds") != std::string::npos);
  CHECK(text.find("source") != std::string::npos);
}
