#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abpump/fock_basis.hpp"
#include "abpump/hamiltonian.hpp"
#include "abpump/lattice.hpp"

namespace abpump {

/// Instantaneous eigenvalues along the driving phase phi = phi0 + Omega t.
struct SpectralFlow {
  std::vector<double> phases;
  Eigen::MatrixXd levels;  ///< phases.size() x n_levels, ascending per row
};

struct SpectrumOptions {
  std::size_t dense_cap = 3000;
  /// When set, only the lowest k levels are computed (iteratively above the cap).
  std::optional<std::size_t> lowest;
};

/// Params with the driving frozen at phase phi (phi0 = phi, Omega irrelevant at t = 0).
ModelParams at_phase(ModelParams params, double phi);

SpectralFlow instantaneous_spectrum(const LatticeGraph& graph, const FockBasis& basis,
                                    const ModelParams& params, const std::vector<double>& phase_grid,
                                    const SpectrumOptions& options = {});

/// Lowest `k` eigenvalues of a Hermitian sparse operator by Lanczos with full
/// reorthogonalization, grown until the Ritz residuals fall below `tolerance`.
Eigen::VectorXd lowest_eigenvalues(const FrozenHamiltonian& h, std::size_t k,
                                   double tolerance = 1e-9);

/// `count` points covering [0, 2 pi) without the endpoint.
std::vector<double> phase_grid(std::size_t count = 601);

void write_spectrum_csv(std::ostream& os, const SpectralFlow& flow);

enum class Branch { top, bottom };
Branch parse_branch(const std::string& text);
std::string to_string(Branch branch);

struct GapReport {
  Branch branch = Branch::bottom;
  int particles = 1;
  double interaction = 0.0;
  double hopping = 1.0;
  double min_gap = 0.0;
  double phase_at_min = 0.0;
};

struct GapOptions {
  double amplitude = 60.0;       ///< P0 of the reduced model
  std::size_t grid = 601;        ///< points per 2 pi
  double tolerance = 1e-4;       ///< on the refined minimum, in units of J
  int max_refinements = 40;      ///< interval bisections when tracking loses the branch
};

/**
 * Minimal gap between the tracked branch of the two-site model and its
 * nearest level while |N,0> is pumped to |0,N>. The top branch starts at
 * phi = 0 on the highest level, the bottom branch at phi = pi on the lowest.
 * The branch is followed by maximal eigenvector overlap.
 */
GapReport two_site_gap(int particles, double interaction, Branch branch, double hopping = 1.0,
                       const GapOptions& options = {});

struct GapScaling {
  double u_exponent = 0.0;  ///< b in gap ~ U^-b
  double j_exponent = 0.0;  ///< a in gap ~ J^a
  std::vector<double> interactions;
  std::vector<double> gaps;
};

/// Log-log regression of two_site_gap over `interactions` (at least three points).
GapScaling fit_gap_scaling(int particles, const std::vector<double>& interactions, Branch branch,
                           const GapOptions& options = {});

/// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

/// `count` log-spaced values from `lo` to `hi` inclusive.
std::vector<double> log_space(double lo, double hi, std::size_t count);

}  // namespace abpump
