#include "abpump/junction.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "abpump/errors.hpp"
#include "abpump/lattice.hpp"

namespace abpump {

namespace {

ModelParams junction_params(double interaction, double phase, const JunctionSettings& s) {
  if (!(s.frequency > 0.0)) throw ConfigError("junction runs need a positive driving frequency");
  ModelParams p;
  p.hopping = s.hopping;
  p.interaction = interaction;
  p.amplitude = s.amplitude;
  p.frequency = s.frequency;
  p.phase = phase;
  return p;
}

EvolutionPlan transfer_plan(const JunctionSettings& s) {
  EvolutionPlan plan;
  plan.t_end = transfer_time(s.frequency);
  plan.dt = s.dt;
  plan.record_stride = 10;
  return plan;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

double transfer_time(double frequency) {
  return 2.0 * std::numbers::pi / std::abs(frequency) / 3.0;
}

Fidelity run_noon_generation(int particles, double interaction, const JunctionSettings& settings) {
  if (particles < 1) throw ConfigError("NOON generation needs at least one particle");
  const LatticeGraph fork = build_fork(0, 1);
  const FockBasis basis(3, static_cast<std::size_t>(particles));
  const SparseHamiltonian h = assemble(fork, basis, junction_params(interaction, 0.0, settings));
  const State psi = evolve(initial_state(basis, fork), h, transfer_plan(settings));
  return noon_fidelity(psi, basis, 1, 2);
}

ForkTransmission run_fork_interference(double flux, double interaction, int particles,
                                       const JunctionSettings& settings) {
  if (particles < 1) throw ConfigError("fork interference needs at least one particle");
  const LatticeGraph fork = build_fork(1, 0);
  const auto n = static_cast<std::size_t>(particles);
  const FockBasis basis(3, n);
  State psi = State::Zero(static_cast<Eigen::Index>(basis.size()));
  const double theta = 2.0 * std::numbers::pi * flux;
  for (int k = 0; k <= particles; ++k) {
    const Occupation occ{0, static_cast<std::uint8_t>(k), static_cast<std::uint8_t>(particles - k)};
    const double weight = std::sqrt(binomial(particles, k) / std::pow(2.0, particles));
    psi[static_cast<Eigen::Index>(basis.index_of(occ))] =
        std::polar(weight, theta * static_cast<double>(particles - k));
  }
  const SparseHamiltonian h = assemble(fork, basis, junction_params(interaction, 0.0, settings));
  const State out = evolve(psi, h, transfer_plan(settings));
  const double hub = site_densities(out, basis)[0];
  return {hub, static_cast<double>(particles) - hub};
}

TransferResult run_two_site_transfer(int particles, double interaction, Branch branch,
                                     const JunctionSettings& settings) {
  if (particles < 1) throw ConfigError("two-site transfer needs at least one particle");
  const LatticeGraph chain = build_chain(2);
  const FockBasis basis(2, static_cast<std::size_t>(particles));
  const double phase = branch == Branch::top ? 0.0 : std::numbers::pi;
  const SparseHamiltonian h = assemble(chain, basis, junction_params(interaction, phase, settings));

  // index of |k, N-k>
  std::vector<std::size_t> index(static_cast<std::size_t>(particles) + 1);
  for (int k = 0; k <= particles; ++k)
    index[static_cast<std::size_t>(k)] = basis.index_of(
        Occupation{static_cast<std::uint8_t>(k), static_cast<std::uint8_t>(particles - k)});

  TransferResult result;
  EvolutionPlan plan = transfer_plan(settings);
  plan.record_stride = 4;
  result.final_state = evolve(
      initial_state(basis, chain), h, plan, [&](double t, const State& psi) {
        std::vector<double> row;
        row.reserve(index.size());
        for (std::size_t i : index) row.push_back(std::norm(psi[static_cast<Eigen::Index>(i)]));
        for (std::size_t k = 1; k + 1 < row.size(); ++k)
          result.max_intermediate = std::max(result.max_intermediate, row[k]);
        result.times.push_back(t);
        result.probabilities.push_back(std::move(row));
      });
  result.transfer_fidelity = std::norm(result.final_state[static_cast<Eigen::Index>(index[0])]);
  result.adiabatic = result.transfer_fidelity >= 0.9;
  return result;
}

Fidelity run_bell_generation(double interaction, const JunctionSettings& settings) {
  const LatticeGraph fork = build_fork(0, 1);
  const TwoSpeciesBasis basis(3, 1, 1);
  const double phase = interaction < 0.0 ? 0.0 : std::numbers::pi;
  const SparseHamiltonian h =
      assemble_two_species(fork, basis, junction_params(interaction, phase, settings));
  const State psi = evolve(initial_state(basis, fork), h, transfer_plan(settings));
  return bell_fidelity(psi, basis, {1}, {2});
}

void write_fidelity_csv(std::ostream& os, const std::vector<FidelityPoint>& points) {
  os << "N,U,fidelity_raw,fidelity_phase_max\n" << std::setprecision(12);
  for (const FidelityPoint& p : points)
    os << p.particles << ',' << p.interaction << ',' << p.fidelity.raw << ','
       << p.fidelity.phase_max << '\n';
}

}  // namespace abpump
