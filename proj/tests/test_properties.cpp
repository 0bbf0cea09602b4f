// Whole-pipeline invariants on small instances.

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "abpump/observables.hpp"
#include "abpump/propagator.hpp"
#include "abpump/spectra.hpp"

using namespace abpump;

namespace {

ModelParams driven(double U, double omega, double phase = 0.0) {
  ModelParams p;
  p.interaction = U;
  p.amplitude = 20.0;
  p.frequency = omega;
  p.phase = phase;
  return p;
}

State run(const LatticeGraph& g, const FockBasis& basis, const ModelParams& p, const State& psi0,
          double t_end, double dt, StepMethod method = StepMethod::automatic) {
  const SparseHamiltonian h = assemble(g, basis, p);
  EvolutionPlan plan;
  plan.t_end = t_end;
  plan.dt = dt;
  plan.method = method;
  return evolve(psi0, h, plan);
}

double drain_density(const LatticeGraph& g, const FockBasis& basis, const State& psi) {
  return site_densities(psi, basis)[*g.drain_site];
}

}  // namespace

TEST_CASE("property: particle number is conserved along a trajectory") {
  const LatticeGraph g = build_ring_lead({4, 1, 1, 0.3});
  const FockBasis basis(g.n_sites, 3);
  const SparseHamiltonian h = assemble(g, basis, driven(0.5, 0.05));
  EvolutionPlan plan;
  plan.t_end = 60.0;
  plan.record_stride = 5;
  double worst = 0.0;
  evolve(initial_state(basis, g), h, plan, [&](double, const State& psi) {
    const auto n = site_densities(psi, basis);
    worst = std::max(worst, std::abs(std::accumulate(n.begin(), n.end(), 0.0) - 3.0));
  });
  CHECK(worst < 1e-10);
}

TEST_CASE("property: uniform and single-bond flux are gauge equivalent") {
  for (double flux : {0.0, 0.2, 0.5}) {
    const LatticeGraph uniform = build_ring_lead({4, 1, 1, flux, FluxGauge::uniform});
    const LatticeGraph single = build_ring_lead({4, 1, 1, flux, FluxGauge::single_bond});
    const FockBasis one(uniform.n_sites, 1);
    const SpectralFlow a = instantaneous_spectrum(uniform, one, driven(0.0, 0.05), {0.0, 1.0, 2.5});
    const SpectralFlow b = instantaneous_spectrum(single, one, driven(0.0, 0.05), {0.0, 1.0, 2.5});
    CHECK((a.levels - b.levels).cwiseAbs().maxCoeff() < 1e-10);

    const FockBasis two(uniform.n_sites, 2);
    const ModelParams p = driven(0.5, 0.05);
    const double t_end = arrival_time(4, Band::plus, 0.05);
    const double ta = drain_density(uniform, two, run(uniform, two, p, initial_state(two, uniform), t_end, 0.05, StepMethod::dense));
    const double tb = drain_density(single, two, run(single, two, p, initial_state(two, single), t_end, 0.05, StepMethod::dense));
    CHECK(std::abs(ta - tb) < 1e-10);
  }
}

TEST_CASE("property: time reversal recovers the initial state") {
  const double flux = 0.3, omega = 0.05, T = 80.0;
  const LatticeGraph forward_g = build_ring_lead({4, 1, 1, flux});
  const LatticeGraph backward_g = build_ring_lead({4, 1, 1, -flux});
  const FockBasis basis(forward_g.n_sites, 2);
  const State psi0 = initial_state(basis, forward_g);
  const ModelParams forward = driven(0.5, omega, 0.4);
  // H*(T - s): conjugated Peierls phases, reversed drive, phase advanced by Omega T
  const ModelParams backward = driven(0.5, -omega, 0.4 + omega * T);
  const State mid = run(forward_g, basis, forward, psi0, T, 0.05).conjugate();
  const State back = run(backward_g, basis, backward, mid, T, 0.05).conjugate();
  CHECK(std::norm(psi0.dot(back)) > 1.0 - 1e-6);
}

TEST_CASE("property: two-site anti-crossing becomes adiabatic as Omega decreases") {
  const LatticeGraph g = build_chain(2);
  const FockBasis basis(2, 1);
  std::vector<double> fidelity;
  for (double omega : {0.1, 0.05, 0.01}) {
    const ModelParams p = driven(0.0, omega);
    const double t_end = 2.0 * std::numbers::pi / omega / 3.0;
    const State psi = run(g, basis, p, initial_state(basis, g), t_end, 0.05);
    // |1,0> starts on the upper level; follow it to the end of the sweep
    const SparseHamiltonian h = assemble(g, basis, p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.dense(t_end));
    fidelity.push_back(std::norm(solver.eigenvectors().col(1).dot(psi)));
  }
  CHECK(fidelity[0] < fidelity[1]);
  CHECK(fidelity[1] < fidelity[2]);
  CHECK(fidelity[2] > 0.99);
}

TEST_CASE("property: midpoint freezing converges at second order") {
  const LatticeGraph g = build_ring_lead({4, 1, 1, 0.25});
  const FockBasis basis(g.n_sites, 1);
  ModelParams p = driven(0.0, 0.2);
  p.amplitude = 4.0;
  const State psi0 = initial_state(basis, g);
  const double t_end = 30.0;
  const double ref = drain_density(g, basis, run(g, basis, p, psi0, t_end, 0.0025, StepMethod::dense));
  const double coarse = drain_density(g, basis, run(g, basis, p, psi0, t_end, 0.1, StepMethod::dense));
  const double fine = drain_density(g, basis, run(g, basis, p, psi0, t_end, 0.05, StepMethod::dense));
  const double factor = std::abs(coarse - ref) / std::abs(fine - ref);
  MESSAGE("dt-halving error factor " << factor);
  CHECK(factor >= 4.0);
}

TEST_CASE("property: Krylov trajectory agrees with dense stepping") {
  const LatticeGraph g = build_ring_lead({4, 1, 1, 0.4});
  const FockBasis basis(g.n_sites, 2);
  const ModelParams p = driven(0.5, 0.05);
  const State psi0 = initial_state(basis, g);
  const State a = run(g, basis, p, psi0, 50.0, 0.05, StepMethod::krylov);
  const State b = run(g, basis, p, psi0, 50.0, 0.05, StepMethod::dense);
  CHECK((a - b).norm() < 1e-8);
}

TEST_CASE("property: gap trends of the two-site model") {
  double previous = 0.0;
  for (int n = 1; n <= 5; ++n) {
    const double gap = two_site_gap(n, 10.0, Branch::bottom).min_gap;
    CHECK(gap > previous);
    previous = gap;
  }
  double last = 1e9;
  for (double U : {5.0, 10.0, 20.0}) {
    const double gap = two_site_gap(3, U, Branch::top).min_gap;
    CHECK(gap < last);
    last = gap;
  }
}
