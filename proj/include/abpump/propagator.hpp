#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "abpump/fock_basis.hpp"
#include "abpump/hamiltonian.hpp"
#include "abpump/lattice.hpp"

namespace abpump {

enum class StepMethod { automatic, krylov, dense };

struct KrylovOptions {
  int max_dim = 30;          ///< Krylov subspace dimension
  double tolerance = 1e-10;  ///< bound on the estimated error of exp(-iHdt)psi
  int max_halvings = 8;      ///< a step is split into at most 2^max_halvings substeps
};

struct EvolutionPlan {
  double t_start = 0.0;
  double t_end = 0.0;
  double dt = 0.05;
  std::size_t record_stride = 20;  ///< steps between observer calls
  StepMethod method = StepMethod::automatic;
  KrylovOptions krylov;
  std::size_t dense_threshold = 16;  ///< automatic picks dense stepping up to this dimension
  double max_norm_drift = 1e-6;      ///< evolution aborts beyond this
};

struct EvolutionStats {
  std::size_t steps = 0;
  std::size_t krylov_substeps = 0;
  double max_norm_drift = 0.0;
};

/// Unit vector on the given Fock state.
State fock_state(const FockBasis& basis, std::span<const std::uint8_t> occupation);

/// All particles on the source site adjacent to the ring (site 0 of a chain or fork).
State initial_state(const FockBasis& basis, const LatticeGraph& graph);
State initial_state(const TwoSpeciesBasis& basis, const LatticeGraph& graph);

/**
 * exp(-i H dt) psi by Lanczos with full reorthogonalization. Steps whose
 * error estimate exceeds the tolerance at the maximal subspace dimension
 * are split in halves; NumericalError when the split limit is reached.
 */
class KrylovStepper {
 public:
  explicit KrylovStepper(KrylovOptions options = {});

  State step(const FrozenHamiltonian& h, const State& psi, double dt);
  /// Substeps used by the last call.
  std::size_t last_substeps() const { return last_substeps_; }

 private:
  bool try_step(const FrozenHamiltonian& h, const State& psi, double dt, State& out);

  KrylovOptions options_;
  Eigen::MatrixXcd basis_;
  State w_;
  std::size_t last_substeps_ = 0;
  int preferred_halvings_ = 0;
  std::size_t calls_ = 0;
};

State expm_step(const FrozenHamiltonian& h, const State& psi, double dt,
                const KrylovOptions& options = {});

/// exp(-i H dt) psi through a full eigendecomposition of the dense matrix.
State dense_expm_step(const FrozenHamiltonian& h, const State& psi, double dt);

using Observer = std::function<void(double t, const State& psi)>;

/**
 * Evolves psi0 from plan.t_start to plan.t_end. Every step freezes H at the
 * step midpoint. The observer sees t_start, every record_stride-th step and
 * t_end. Throws NumericalError if the norm drifts beyond plan.max_norm_drift.
 */
State evolve(const State& psi0, const SparseHamiltonian& h, const EvolutionPlan& plan,
             const Observer& observer = {}, EvolutionStats* stats = nullptr);

}  // namespace abpump
