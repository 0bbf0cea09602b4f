#include "abpump/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "abpump/errors.hpp"

namespace abpump {

BandPreset band_preset(Band band) {
  switch (band) {
    case Band::plus: return {Band::plus, 0.0, +1, -1};
    case Band::minus: return {Band::minus, std::numbers::pi, +1, -1};
    case Band::central_plus: return {Band::central_plus, std::numbers::pi / 2, -1, 2};
    case Band::central_minus: return {Band::central_minus, -std::numbers::pi / 2, -1, 2};
  }
  throw ConfigError("unknown band");
}

Band parse_band(const std::string& text) {
  if (text == "+1" || text == "1" || text == "plus" || text == "top") return Band::plus;
  if (text == "-1" || text == "minus" || text == "bottom") return Band::minus;
  if (text == "0+" || text == "central+" || text == "central_plus") return Band::central_plus;
  if (text == "0-" || text == "central-" || text == "central_minus") return Band::central_minus;
  throw ConfigError("unknown band '" + text + "' (expected +1, -1, 0+ or 0-)");
}

std::string to_string(Band band) {
  switch (band) {
    case Band::plus: return "+1";
    case Band::minus: return "-1";
    case Band::central_plus: return "0+";
    case Band::central_minus: return "0-";
  }
  return "?";
}

Band swapped(Band band) {
  switch (band) {
    case Band::plus: return Band::minus;
    case Band::minus: return Band::plus;
    case Band::central_plus: return Band::central_minus;
    case Band::central_minus: return Band::central_plus;
  }
  return band;
}

void apply_preset(ModelParams& params, Band band) {
  const BandPreset preset = band_preset(band);
  params.phase = preset.phase;
  params.frequency = preset.frequency_sign * std::abs(params.frequency);
}

double potential_at(double t, int offset, const ModelParams& params) {
  return params.amplitude *
         std::cos(2.0 * std::numbers::pi * offset / 3.0 - params.phase - params.frequency * t);
}

std::vector<std::string> regime_warnings(const ModelParams& params) {
  std::vector<std::string> warnings;
  const double scale = std::max(std::abs(params.hopping), std::abs(params.interaction));
  if (std::abs(params.amplitude) < 5.0 * scale) {
    std::ostringstream os;
    os << "P0=" << params.amplitude << " is not much larger than max(J, |U|)=" << scale
       << "; sites are not strongly localized";
    warnings.push_back(os.str());
  }
  if (params.interaction != 0.0 && std::abs(params.interaction) < std::abs(params.frequency)) {
    std::ostringstream os;
    os << "|U|=" << std::abs(params.interaction) << " is below |Omega|="
       << std::abs(params.frequency) << "; many-body splittings are washed out by the drive";
    warnings.push_back(os.str());
  }
  return warnings;
}

SparseHamiltonian::SparseHamiltonian(SparseMatrix offdiag, Eigen::VectorXd static_diag,
                                     Eigen::MatrixXd occupations, std::vector<int> offsets,
                                     ModelParams params)
    : offdiag_(std::move(offdiag)),
      static_diag_(std::move(static_diag)),
      occupations_(std::move(occupations)),
      offsets_(std::move(offsets)),
      params_(params) {
  offdiag_.makeCompressed();
  row_abs_sum_ = Eigen::VectorXd::Zero(offdiag_.rows());
  for (Eigen::Index r = 0; r < offdiag_.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(offdiag_, r); it; ++it) row_abs_sum_[r] += std::abs(it.value());
}

Eigen::VectorXd SparseHamiltonian::diagonal_at(double t) const {
  Eigen::VectorXd potentials(static_cast<Eigen::Index>(offsets_.size()));
  for (std::size_t j = 0; j < offsets_.size(); ++j) potentials[static_cast<Eigen::Index>(j)] = potential_at(t, offsets_[j], params_);
  return static_diag_ + occupations_ * potentials;
}

void SparseHamiltonian::apply_with_diagonal(const Eigen::VectorXd& diagonal, const State& in,
                                            State& out) const {
  if (in.size() != static_diag_.size() || diagonal.size() != static_diag_.size())
    throw ConfigError("state dimension does not match the Hamiltonian");
  out.noalias() = offdiag_ * in;
  out.array() += diagonal.array().cast<Complex>() * in.array();
}

State SparseHamiltonian::apply(double t, const State& psi) const {
  State out(psi.size());
  apply_with_diagonal(diagonal_at(t), psi, out);
  return out;
}

Eigen::MatrixXcd SparseHamiltonian::dense(double t, std::size_t max_dim) const {
  if (dim() > max_dim) throw ConfigError("dense Hamiltonian requested above the dimension cap");
  Eigen::MatrixXcd h = Eigen::MatrixXcd(offdiag_);
  h.diagonal() += diagonal_at(t).cast<Complex>();
  return h;
}

double SparseHamiltonian::norm_bound(const Eigen::VectorXd& diagonal) const {
  return (row_abs_sum_ + diagonal.cwiseAbs()).maxCoeff();
}

Eigen::MatrixXcd FrozenHamiltonian::dense() const {
  Eigen::MatrixXcd h = Eigen::MatrixXcd(hamiltonian->offdiag());
  h.diagonal() += diagonal.cast<Complex>();
  return h;
}

namespace {

using Triplet = Eigen::Triplet<Complex>;

struct Hop {
  std::size_t from_state;
  std::size_t to_state;
  Complex amplitude;
};

// Matrix elements <to_state| -J e^{i 2 pi phase} a^dag_from a_to + h.c. |from_state>
// for every state of `basis`.
std::vector<Hop> hopping_terms(const FockBasis& basis, const std::vector<Bond>& bonds, double J) {
  std::vector<Hop> hops;
  Occupation work;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Occupation& occ = basis.state(k);
    for (const Bond& b : bonds) {
      const Complex forward = -J * std::polar(1.0, 2.0 * std::numbers::pi * b.phase);
      // a^dag_from a_to
      if (occ[b.to] > 0) {
        work = occ;
        const double m = static_cast<double>(work[b.to]) * (work[b.from] + 1);
        --work[b.to];
        ++work[b.from];
        hops.push_back({k, basis.index_of(work), forward * std::sqrt(m)});
      }
      // a^dag_to a_from
      if (occ[b.from] > 0) {
        work = occ;
        const double m = static_cast<double>(work[b.from]) * (work[b.to] + 1);
        --work[b.from];
        ++work[b.to];
        hops.push_back({k, basis.index_of(work), std::conj(forward) * std::sqrt(m)});
      }
    }
  }
  return hops;
}

void require_hermitian(const SparseMatrix& m) {
  SparseMatrix adj = m.adjoint();
  SparseMatrix diff = m - adj;
  diff.prune(Complex(0.0, 0.0), 0.0);
  if (diff.nonZeros() != 0) throw NumericalError("assembled hopping matrix is not Hermitian");
}

void require_sites(const LatticeGraph& graph, std::size_t basis_sites) {
  if (graph.n_sites != basis_sites) {
    std::ostringstream os;
    os << "basis has " << basis_sites << " sites but the lattice has " << graph.n_sites;
    throw ConfigError(os.str());
  }
}

}  // namespace

SparseHamiltonian assemble(const LatticeGraph& graph, const FockBasis& basis,
                           const ModelParams& params) {
  require_sites(graph, basis.sites());
  const auto dim = static_cast<Eigen::Index>(basis.size());
  const auto L = static_cast<Eigen::Index>(basis.sites());

  std::vector<Triplet> triplets;
  for (const Hop& h : hopping_terms(basis, graph.bonds, params.hopping))
    triplets.emplace_back(static_cast<Eigen::Index>(h.to_state),
                          static_cast<Eigen::Index>(h.from_state), h.amplitude);
  SparseMatrix offdiag(dim, dim);
  offdiag.setFromTriplets(triplets.begin(), triplets.end());
  require_hermitian(offdiag);

  Eigen::VectorXd diag(dim);
  Eigen::MatrixXd occupations(dim, L);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Occupation& occ = basis.state(static_cast<std::size_t>(k));
    double interaction = 0.0;
    for (Eigen::Index j = 0; j < L; ++j) {
      const double n = occ[static_cast<std::size_t>(j)];
      occupations(k, j) = n;
      interaction += n * (n - 1.0);
    }
    diag[k] = 0.5 * params.interaction * interaction;
  }
  return SparseHamiltonian(std::move(offdiag), std::move(diag), std::move(occupations),
                           graph.driving_offset, params);
}

SparseHamiltonian assemble_two_species(const LatticeGraph& graph, const TwoSpeciesBasis& basis,
                                       const ModelParams& params) {
  require_sites(graph, basis.sites());
  const auto dim = static_cast<Eigen::Index>(basis.size());
  const auto L = static_cast<Eigen::Index>(basis.sites());
  const std::size_t n_up = basis.up().size();
  const std::size_t n_down = basis.down().size();

  std::vector<Triplet> triplets;
  for (const Hop& h : hopping_terms(basis.up(), graph.bonds, params.hopping)) {
    for (std::size_t d = 0; d < n_down; ++d)
      triplets.emplace_back(static_cast<Eigen::Index>(basis.index(h.to_state, d)),
                            static_cast<Eigen::Index>(basis.index(h.from_state, d)), h.amplitude);
  }
  for (const Hop& h : hopping_terms(basis.down(), graph.bonds, params.hopping)) {
    for (std::size_t u = 0; u < n_up; ++u)
      triplets.emplace_back(static_cast<Eigen::Index>(basis.index(u, h.to_state)),
                            static_cast<Eigen::Index>(basis.index(u, h.from_state)), h.amplitude);
  }
  SparseMatrix offdiag(dim, dim);
  offdiag.setFromTriplets(triplets.begin(), triplets.end());
  require_hermitian(offdiag);

  Eigen::VectorXd diag(dim);
  Eigen::MatrixXd occupations(dim, L);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const Occupation& up = basis.up().state(basis.up_index(kk));
    const Occupation& down = basis.down().state(basis.down_index(kk));
    double interaction = 0.0;
    for (Eigen::Index j = 0; j < L; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      occupations(k, j) = static_cast<double>(up[jj]) + static_cast<double>(down[jj]);
      interaction += static_cast<double>(up[jj]) * static_cast<double>(down[jj]);
    }
    diag[k] = params.interaction * interaction;
  }
  return SparseHamiltonian(std::move(offdiag), std::move(diag), std::move(occupations),
                           graph.driving_offset, params);
}

}  // namespace abpump
