#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "abpump/errors.hpp"
#include "abpump/observables.hpp"
#include "abpump/propagator.hpp"

using namespace abpump;

namespace {

std::vector<double> sampled(std::size_t m, double (*f)(double)) {
  std::vector<double> out;
  for (std::size_t k = 0; k < m; ++k) out.push_back(f(static_cast<double>(k) / m));
  return out;
}

}  // namespace

TEST_CASE("densities") {
  const FockBasis basis(3, 2);
  State psi = State::Zero(static_cast<Eigen::Index>(basis.size()));
  psi[static_cast<Eigen::Index>(basis.index_of(Occupation{2, 0, 0}))] = std::sqrt(0.5);
  psi[static_cast<Eigen::Index>(basis.index_of(Occupation{0, 1, 1}))] = Complex(0.0, std::sqrt(0.5));
  const auto n = site_densities(psi, basis);
  CHECK(n[0] == doctest::Approx(1.0));
  CHECK(n[1] == doctest::Approx(0.5));
  CHECK(n[2] == doctest::Approx(0.5));

  const TwoSpeciesBasis two(2, 1, 1);
  State phi = State::Zero(4);
  phi[static_cast<Eigen::Index>(two.index_of(Occupation{1, 0}, Occupation{0, 1}))] = 1.0;
  CHECK(species_densities(phi, two, true)[0] == doctest::Approx(1.0));
  CHECK(species_densities(phi, two, false)[1] == doctest::Approx(1.0));
  CHECK(site_densities(phi, two)[0] == doctest::Approx(1.0));
}

TEST_CASE("arrival times") {
  CHECK(source_drain_path_length(8) == 6);
  CHECK(arrival_time(8, Band::plus, 0.01) == doctest::Approx(1256.64).epsilon(1e-4));
  CHECK(arrival_time(8, Band::central_plus, -0.01) == doctest::Approx(628.32).epsilon(1e-4));
  CHECK(arrival_time(6, Band::minus, 0.01) == doctest::Approx(1047.20).epsilon(1e-4));
  CHECK_THROWS_AS(arrival_time(8, Band::plus, 0.0), ConfigError);
}

TEST_CASE("flux quantum from sampled curves") {
  auto curve = [](std::vector<double> t) {
    TransmissionCurve c;
    for (std::size_t k = 0; k < t.size(); ++k) c.flux.push_back(static_cast<double>(k) / t.size());
    c.transmitted = std::move(t);
    return c;
  };
  const auto one = sampled(12, [](double f) { return 2.0 * std::pow(std::cos(std::numbers::pi * f), 2); });
  CHECK(flux_quantum(curve(one)) == doctest::Approx(1.0));
  const auto half = sampled(12, [](double f) { return 1.0 + 0.8 * std::cos(4.0 * std::numbers::pi * f); });
  CHECK(flux_quantum(curve(half)) == doctest::Approx(0.5));
  const auto third = sampled(12, [](double f) { return 1.0 + 0.5 * std::cos(6.0 * std::numbers::pi * f); });
  CHECK(flux_quantum(curve(third)) == doctest::Approx(1.0 / 3.0));
  CHECK_FALSE(flux_quantum(curve(std::vector<double>(12, 1.0))).has_value());

  TransmissionCurve uneven = curve(one);
  uneven.flux[3] = 0.3;
  CHECK_THROWS_AS(flux_quantum(uneven), ConfigError);
}

TEST_CASE("NOON fidelity") {
  const FockBasis basis(2, 2);
  const auto i20 = static_cast<Eigen::Index>(basis.index_of(Occupation{2, 0}));
  const auto i02 = static_cast<Eigen::Index>(basis.index_of(Occupation{0, 2}));
  State psi = State::Zero(3);
  psi[i20] = psi[i02] = std::sqrt(0.5);
  CHECK(noon_fidelity(psi, basis, 0, 1).raw == doctest::Approx(1.0));
  psi[i02] = Complex(0.0, std::sqrt(0.5));
  const Fidelity f = noon_fidelity(psi, basis, 0, 1);
  CHECK(f.raw == doctest::Approx(0.5));
  CHECK(f.phase_max == doctest::Approx(1.0));
  psi.setZero();
  psi[i20] = 1.0;
  CHECK(noon_fidelity(psi, basis, 0, 1).phase_max == doctest::Approx(0.5));
}

TEST_CASE("Bell fidelity") {
  const TwoSpeciesBasis basis(3, 1, 1);
  const Occupation s1{0, 1, 0}, s2{0, 0, 1};
  State psi = State::Zero(static_cast<Eigen::Index>(basis.size()));
  psi[static_cast<Eigen::Index>(basis.index_of(s1, s2))] = std::sqrt(0.5);
  psi[static_cast<Eigen::Index>(basis.index_of(s2, s1))] = -std::sqrt(0.5);
  const Fidelity f = bell_fidelity(psi, basis, {1}, {2});
  CHECK(f.raw == doctest::Approx(0.0));
  CHECK(f.phase_max == doctest::Approx(1.0));
  psi.setZero();
  psi[static_cast<Eigen::Index>(basis.index_of(s1, s1))] = 1.0;
  CHECK(bell_fidelity(psi, basis, {1}, {2}).phase_max == doctest::Approx(0.0));
  CHECK_THROWS_AS(bell_fidelity(psi, basis, {1}, {}), ConfigError);
}

TEST_CASE("centroid observables on a synthetic trace") {
  DensityTrace trace;
  const std::vector<int> pos{0, 1};
  for (int k = 0; k <= 10; ++k) {
    const double x = k / 10.0;
    trace.push(k, {1.0 - x, x});
  }
  CHECK(centroid({1.0, 3.0}, pos) == doctest::Approx(0.75));
  CHECK(pumped_displacement(trace, pos, 5.0, 2.0) == doctest::Approx(0.5));
  CHECK(centroid_velocity(trace, pos, 0.0, 10.0) == doctest::Approx(0.1));
  CHECK(*centroid_crossing(trace, pos, 0.45, true) == doctest::Approx(4.5));
  CHECK_FALSE(centroid_crossing(trace, pos, 0.45, false).has_value());
  CHECK(region_density(trace, {1})[4] == doctest::Approx(0.4));

  std::ostringstream os;
  write_density_csv(os, trace);
  CHECK(os.str().rfind("time,n_site0,n_site1\n", 0) == 0);
}

TEST_CASE("no pumping without a drive frequency") {
  ModelParams p;
  p.frequency = 0.0;
  const LatticeGraph g = build_chain(6);
  const FockBasis basis(6, 1);
  const SparseHamiltonian h = assemble(g, basis, p);
  EvolutionPlan plan;
  plan.t_end = 200.0;
  plan.record_stride = 10;
  DensityTrace trace;
  evolve(initial_state(basis, g), h, plan,
         [&](double t, const State& psi) { trace.push(t, site_densities(psi, basis)); });
  CHECK(std::abs(pumped_displacement(trace, g.driving_offset, 150.0)) < 0.01);
}
