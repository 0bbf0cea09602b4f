#include "abpump/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "abpump/errors.hpp"

namespace abpump {

State fock_state(const FockBasis& basis, std::span<const std::uint8_t> occupation) {
  State psi = State::Zero(static_cast<Eigen::Index>(basis.size()));
  psi[static_cast<Eigen::Index>(basis.index_of(occupation))] = 1.0;
  return psi;
}

State initial_state(const FockBasis& basis, const LatticeGraph& graph) {
  if (!graph.source_site) throw ConfigError("lattice has no source site");
  Occupation occ(basis.sites(), 0);
  occ[*graph.source_site] = static_cast<std::uint8_t>(basis.particles());
  return fock_state(basis, occ);
}

State initial_state(const TwoSpeciesBasis& basis, const LatticeGraph& graph) {
  if (!graph.source_site) throw ConfigError("lattice has no source site");
  Occupation up(basis.sites(), 0);
  Occupation down(basis.sites(), 0);
  up[*graph.source_site] = static_cast<std::uint8_t>(basis.up().particles());
  down[*graph.source_site] = static_cast<std::uint8_t>(basis.down().particles());
  State psi = State::Zero(static_cast<Eigen::Index>(basis.size()));
  psi[static_cast<Eigen::Index>(basis.index_of(up, down))] = 1.0;
  return psi;
}

KrylovStepper::KrylovStepper(KrylovOptions options) : options_(options) {
  if (options_.max_dim < 2) throw ConfigError("Krylov dimension must be at least 2");
}

bool KrylovStepper::try_step(const FrozenHamiltonian& h, const State& psi, double dt, State& out) {
  const Eigen::Index n = psi.size();
  const int m_max = static_cast<int>(std::min<Eigen::Index>(options_.max_dim, n));
  const double beta0 = psi.norm();
  if (beta0 == 0.0) {
    out = psi;
    return true;
  }
  if (basis_.rows() != n || basis_.cols() < m_max + 1) basis_.resize(n, m_max + 1);

  std::vector<double> alpha;
  std::vector<double> beta;
  basis_.col(0) = psi / beta0;

  const double scale = h.hamiltonian->norm_bound(h.diagonal);
  auto coefficients = [&](int k) {
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(beta.data(), std::max(k - 1, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = eig.eigenvectors();
    Eigen::VectorXcd phases =
        (eig.eigenvalues().cast<Complex>() * Complex(0.0, -dt)).array().exp();
    Eigen::VectorXcd c = q.cast<Complex>() * (phases.array() * q.row(0).transpose().cast<Complex>().array()).matrix();
    return c;
  };

  for (int j = 0; j < m_max; ++j) {
    h.apply(basis_.col(j), w_);
    const double a = basis_.col(j).dot(w_).real();
    alpha.push_back(a);
    // full reorthogonalization, applied twice for stability
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::VectorXcd overlaps = basis_.leftCols(j + 1).adjoint() * w_;
      w_.noalias() -= basis_.leftCols(j + 1) * overlaps;
    }
    const double b = w_.norm();
    const int k = j + 1;
    const bool breakdown = b <= 1e-13 * std::max(scale, 1.0);
    const bool last = (k == m_max);
    if (breakdown || last || (k >= 6 && k % 4 == 0)) {
      Eigen::VectorXcd c = coefficients(k);
      const double error = breakdown ? 0.0 : b * std::abs(c[k - 1]) * beta0;
      if (breakdown || error <= options_.tolerance || k == n) {
        out.noalias() = beta0 * (basis_.leftCols(k) * c);
        return true;
      }
      if (last) return false;
    }
    beta.push_back(b);
    basis_.col(j + 1) = w_ / b;
  }
  return false;
}

State KrylovStepper::step(const FrozenHamiltonian& h, const State& psi, double dt) {
  if (dt == 0.0) {
    last_substeps_ = 0;
    return psi;
  }
  if (w_.size() != psi.size()) w_.resize(psi.size());
  // Start from the last successful split so consecutive similar steps do not
  // pay for failed attempts; every 32 calls probe one level coarser.
  int halvings = preferred_halvings_;
  if (++calls_ % 32 == 0) halvings = std::max(0, halvings - 1);
  State out(psi.size());
  while (halvings <= options_.max_halvings) {
    const std::size_t parts = std::size_t{1} << halvings;
    const double sub = dt / static_cast<double>(parts);
    State current = psi;
    bool ok = true;
    for (std::size_t p = 0; p < parts && ok; ++p) {
      ok = try_step(h, current, sub, out);
      if (ok) current.swap(out);
    }
    if (ok) {
      preferred_halvings_ = halvings;
      last_substeps_ = parts;
      return current;
    }
    ++halvings;
  }
  std::ostringstream os;
  os << "Krylov step did not converge to tolerance " << options_.tolerance << " with dimension "
     << options_.max_dim << " after splitting dt=" << dt << " into " << (1 << options_.max_halvings)
     << " substeps (norm bound of H: " << h.hamiltonian->norm_bound(h.diagonal) << ")";
  throw NumericalError(os.str());
}

State expm_step(const FrozenHamiltonian& h, const State& psi, double dt,
                const KrylovOptions& options) {
  KrylovStepper stepper(options);
  return stepper.step(h, psi, dt);
}

State dense_expm_step(const FrozenHamiltonian& h, const State& psi, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h.dense());
  const Eigen::MatrixXcd& q = eig.eigenvectors();
  Eigen::VectorXcd phases = (eig.eigenvalues().cast<Complex>() * Complex(0.0, -dt)).array().exp();
  return q * (phases.array() * (q.adjoint() * psi).array()).matrix();
}

State evolve(const State& psi0, const SparseHamiltonian& h, const EvolutionPlan& plan,
             const Observer& observer, EvolutionStats* stats) {
  if (!(plan.dt > 0.0)) throw ConfigError("evolution dt must be positive");
  if (!(plan.t_end > plan.t_start)) throw ConfigError("evolution needs t_end > t_start");
  if (static_cast<std::size_t>(psi0.size()) != h.dim())
    throw ConfigError("initial state dimension does not match the Hamiltonian");
  const double norm0 = psi0.norm();
  if (std::abs(norm0 - 1.0) > 1e-8) throw ConfigError("initial state is not normalized");

  const double span = plan.t_end - plan.t_start;
  const auto steps = static_cast<std::size_t>(std::ceil(span / plan.dt - 1e-9));
  const std::size_t stride = std::max<std::size_t>(plan.record_stride, 1);
  const bool dense = plan.method == StepMethod::dense ||
                     (plan.method == StepMethod::automatic && h.dim() <= plan.dense_threshold);

  KrylovStepper stepper(plan.krylov);
  EvolutionStats local;
  State psi = psi0;
  if (observer) observer(plan.t_start, psi);

  for (std::size_t s = 0; s < steps; ++s) {
    const double t0 = plan.t_start + static_cast<double>(s) * plan.dt;
    const double t1 = (s + 1 == steps) ? plan.t_end : t0 + plan.dt;
    const double tau = t1 - t0;
    FrozenHamiltonian frozen(h, t0 + 0.5 * tau);
    if (dense) {
      psi = dense_expm_step(frozen, psi, tau);
    } else {
      psi = stepper.step(frozen, psi, tau);
      local.krylov_substeps += stepper.last_substeps();
    }
    const double drift = std::abs(psi.norm() - 1.0);
    local.max_norm_drift = std::max(local.max_norm_drift, drift);
    if (drift > plan.max_norm_drift) {
      std::ostringstream os;
      os << "norm drift " << drift << " at t=" << t1 << " exceeds " << plan.max_norm_drift;
      throw NumericalError(os.str());
    }
    ++local.steps;
    if (observer && ((s + 1) % stride == 0 || s + 1 == steps)) observer(t1, psi);
  }
  if (stats) *stats = local;
  return psi;
}

}  // namespace abpump
