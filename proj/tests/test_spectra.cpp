#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "abpump/errors.hpp"
#include "abpump/spectra.hpp"

using namespace abpump;

namespace {

ModelParams undriven() {
  ModelParams p;
  p.amplitude = 0.0;
  p.frequency = 0.0;
  return p;
}

}  // namespace

TEST_CASE("spectrum: free chain matches the tight-binding dispersion") {
  for (std::size_t L : {2u, 3u, 5u}) {
    const FockBasis basis(L, 1);
    const SpectralFlow flow = instantaneous_spectrum(build_chain(L), basis, undriven(), {0.0});
    std::vector<double> expected;
    for (std::size_t k = 1; k <= L; ++k)
      expected.push_back(-2.0 * std::cos(std::numbers::pi * k / (L + 1.0)));
    std::sort(expected.begin(), expected.end());
    for (std::size_t k = 0; k < L; ++k)
      CHECK(flow.levels(0, static_cast<Eigen::Index>(k)) == doctest::Approx(expected[k]));
  }
  // two sites: splitting 2J
  const SpectralFlow two = instantaneous_spectrum(build_chain(2), FockBasis(2, 1), undriven(), {0.0});
  CHECK(two.levels(0, 1) - two.levels(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("spectrum: triangle is periodic under a 2 pi / 3 phase shift") {
  LatticeGraph tri = build_chain(3);
  tri.bonds.push_back({2, 0, 0.1});
  const FockBasis basis(3, 2);
  ModelParams p;
  p.amplitude = 4.0;
  p.interaction = 0.7;
  const double shift = 2.0 * std::numbers::pi / 3.0;
  const SpectralFlow flow = instantaneous_spectrum(tri, basis, p, {0.4, 0.4 + shift});
  CHECK((flow.levels.row(0) - flow.levels.row(1)).norm() < 1e-10);
}

TEST_CASE("spectrum: Lanczos lowest levels agree with dense diagonalization") {
  ModelParams p;
  p.interaction = 0.5;
  p.amplitude = 5.0;
  const LatticeGraph g = build_ring_lead({6, 1, 1, 0.3});
  const FockBasis basis(g.n_sites, 3);
  const SparseHamiltonian h = assemble(g, basis, p);
  const FrozenHamiltonian frozen(h, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(frozen.dense());
  const Eigen::VectorXd low = lowest_eigenvalues(frozen, 5);
  REQUIRE(low.size() == 5);
  for (Eigen::Index k = 0; k < 5; ++k) CHECK(low[k] == doctest::Approx(solver.eigenvalues()[k]).epsilon(1e-8));
}

TEST_CASE("spectrum: dense cap") {
  const LatticeGraph g = build_ring_lead({6, 1, 1, 0.0});
  const FockBasis basis(g.n_sites, 3);
  SpectrumOptions opts;
  opts.dense_cap = 10;
  CHECK_THROWS_AS(instantaneous_spectrum(g, basis, ModelParams{}, {0.0}, opts), ConfigError);
  opts.lowest = 3;
  const SpectralFlow flow = instantaneous_spectrum(g, basis, ModelParams{}, {0.0, 1.0}, opts);
  CHECK(flow.levels.rows() == 2);
  CHECK(flow.levels.cols() == 3);
}

TEST_CASE("spectrum: grid and csv") {
  const auto grid = phase_grid(4);
  CHECK(grid.size() == 4);
  CHECK(grid[1] == doctest::Approx(std::numbers::pi / 2));
  CHECK_THROWS_AS(phase_grid(0), ConfigError);
  std::ostringstream os;
  write_spectrum_csv(os, instantaneous_spectrum(build_chain(2), FockBasis(2, 1), undriven(), {0.0}));
  CHECK(os.str().rfind("phi,E0,E1\n", 0) == 0);
}

TEST_CASE("two-site gap: single particle avoided crossing is 2J") {
  for (Branch b : {Branch::top, Branch::bottom}) {
    CHECK(two_site_gap(1, 0.0, b).min_gap == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(two_site_gap(1, 0.0, b, 0.5).min_gap == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("two-site gap: bottom branch approaches 2 sqrt(N) J at strong interaction") {
  for (int n : {2, 3}) {
    const GapReport r = two_site_gap(n, 10.0, Branch::bottom);
    // first resonance |N,0> <-> |N-1,1> has matrix element sqrt(N) J
    CHECK(r.min_gap == doctest::Approx(2.0 * std::sqrt(n)).epsilon(0.02));
    CHECK(r.particles == n);
  }
}

TEST_CASE("two-site gap: top branch follows second-order tunnelling for N=2") {
  // |2,0> <-> |0,2> through |1,1>: effective coupling 2J^2/U, gap 4J^2/U at large U
  const GapReport r = two_site_gap(2, 40.0, Branch::top);
  CHECK(r.min_gap == doctest::Approx(4.0 / 40.0).epsilon(0.1));
}

TEST_CASE("regression helpers") {
  CHECK(regression_slope({1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(regression_slope({1.0, 2.0}, {1.0, 2.0}), ConfigError);
  const auto xs = log_space(10.0, 40.0, 3);
  CHECK(xs[1] == doctest::Approx(20.0));
  CHECK(parse_branch(to_string(Branch::top)) == Branch::top);
  CHECK_THROWS_AS(parse_branch("middle"), ConfigError);
}
