#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "abpump/fock_basis.hpp"
#include "abpump/lattice.hpp"

namespace abpump {

using Complex = std::complex<double>;
using State = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

/// Model parameters, all energies in units of the hopping J.
struct ModelParams {
  double hopping = 1.0;     ///< J
  double interaction = 0.0; ///< U
  double amplitude = 60.0;  ///< P0
  double frequency = 0.01;  ///< Omega, signed
  double phase = 0.0;       ///< phi0 in radians
};

/// Topological band selected by the initial driving phase.
enum class Band { plus, minus, central_plus, central_minus };

struct BandPreset {
  Band band = Band::plus;
  double phase = 0.0;   ///< phi0
  int frequency_sign = 1;
  int chern = -1;
};

BandPreset band_preset(Band band);
/// Accepts "+1", "-1", "0+", "0-" (and "plus", "minus", "central+", "central-").
Band parse_band(const std::string& text);
std::string to_string(Band band);
/// Band with the same dynamics under U -> -U.
Band swapped(Band band);

/// Applies the preset's phi0 and the sign of Omega to `params`.
void apply_preset(ModelParams& params, Band band);

/// P0 cos(2 pi j_eff / 3 - phi0 - Omega t).
double potential_at(double t, int offset, const ModelParams& params);

/// Messages for parameters outside the P0 >> J, |U| regime; empty if fine.
std::vector<std::string> regime_warnings(const ModelParams& params);

/**
 * H(t) in a Fock basis, stored as a static Hermitian off-diagonal part, a
 * static diagonal (interaction energy) and per-site occupation columns so
 * that the driving diagonal at time t is sum_j V_j(t) n_j.
 */
class SparseHamiltonian {
 public:
  SparseHamiltonian(SparseMatrix offdiag, Eigen::VectorXd static_diag,
                    Eigen::MatrixXd occupations, std::vector<int> offsets, ModelParams params);

  std::size_t dim() const { return static_cast<std::size_t>(static_diag_.size()); }
  std::size_t sites() const { return offsets_.size(); }
  const SparseMatrix& offdiag() const { return offdiag_; }
  const Eigen::VectorXd& static_diag() const { return static_diag_; }
  /// dim x sites matrix of n_j for every basis state.
  const Eigen::MatrixXd& occupations() const { return occupations_; }
  const std::vector<int>& offsets() const { return offsets_; }
  const ModelParams& params() const { return params_; }

  /// Full diagonal of H(t).
  Eigen::VectorXd diagonal_at(double t) const;

  /// out = (offdiag + diag(diagonal)) * in.
  void apply_with_diagonal(const Eigen::VectorXd& diagonal, const State& in, State& out) const;
  State apply(double t, const State& psi) const;

  /// Dense H(t); refused above `max_dim`.
  Eigen::MatrixXcd dense(double t, std::size_t max_dim = 2000) const;

  /// Upper bound on the spectral radius of H(t) (row-sum norm).
  double norm_bound(const Eigen::VectorXd& diagonal) const;

 private:
  SparseMatrix offdiag_;
  Eigen::VectorXd static_diag_;
  Eigen::MatrixXd occupations_;
  std::vector<int> offsets_;
  ModelParams params_;
  Eigen::VectorXd row_abs_sum_;
};

/// H(t) frozen at one instant: a Hamiltonian and its diagonal at that time.
struct FrozenHamiltonian {
  const SparseHamiltonian* hamiltonian = nullptr;
  Eigen::VectorXd diagonal;

  FrozenHamiltonian(const SparseHamiltonian& h, double t)
      : hamiltonian(&h), diagonal(h.diagonal_at(t)) {}

  std::size_t dim() const { return hamiltonian->dim(); }
  void apply(const State& in, State& out) const { hamiltonian->apply_with_diagonal(diagonal, in, out); }
  Eigen::MatrixXcd dense() const;
};

SparseHamiltonian assemble(const LatticeGraph& graph, const FockBasis& basis,
                           const ModelParams& params);

/// Same hopping for both species, U n_up n_down on site, driving on the total density.
SparseHamiltonian assemble_two_species(const LatticeGraph& graph, const TwoSpeciesBasis& basis,
                                       const ModelParams& params);

}  // namespace abpump
