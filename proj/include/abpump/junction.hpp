#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "abpump/hamiltonian.hpp"
#include "abpump/observables.hpp"
#include "abpump/propagator.hpp"
#include "abpump/spectra.hpp"

namespace abpump {

/// Drive and integration settings shared by the reduced-model runs.
struct JunctionSettings {
  double hopping = 1.0;
  double amplitude = 40.0;  ///< P0
  double frequency = 0.01;  ///< Omega > 0
  double dt = 0.05;
};

/// Duration of one site-to-site transfer: a third of the driving period.
double transfer_time(double frequency);

/// Fork pumped hub -> arms from |N,0,0> with phi0 = 0; fidelity against the
/// NOON state of the two arm sites.
Fidelity run_noon_generation(int particles, double interaction, const JunctionSettings& settings = {});

struct ForkTransmission {
  double transmitted = 0.0;
  double reflected = 0.0;
};

/**
 * Fork pumped arms -> hub. The input is (a1^dag + e^{i 2 pi Phi} a2^dag)^N |0>
 * normalized; transmitted is the final hub density.
 */
ForkTransmission run_fork_interference(double flux, double interaction, int particles = 1,
                                       const JunctionSettings& settings = {});

struct TransferResult {
  State final_state;
  std::vector<double> times;
  /// probability[t][k] of the Fock state |k, N-k>, k = 0..N.
  std::vector<std::vector<double>> probabilities;
  double transfer_fidelity = 0.0;        ///< |<0,N|psi_final>|^2
  double max_intermediate = 0.0;         ///< max over time and 0<k<N
  bool adiabatic = true;                 ///< false when transfer_fidelity < 0.9
};

/// Two sites from |N,0>; phi0 = 0 for the top branch and pi for the bottom branch.
TransferResult run_two_site_transfer(int particles, double interaction, Branch branch,
                                     const JunctionSettings& settings = {});

/**
 * One up and one down particle start on the fork hub and are pumped into the
 * arms on the bottom branch (phi0 = pi). For U < 0 the top branch (phi0 = 0)
 * is used, which maps onto the same dynamics.
 */
Fidelity run_bell_generation(double interaction, const JunctionSettings& settings = {});

/// CSV: N,U,fidelity_raw,fidelity_phase_max.
struct FidelityPoint {
  int particles = 0;
  double interaction = 0.0;
  Fidelity fidelity;
};
void write_fidelity_csv(std::ostream& os, const std::vector<FidelityPoint>& points);

}  // namespace abpump
