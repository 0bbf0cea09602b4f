#include "abpump/fock_basis.hpp"

#include <algorithm>
#include <sstream>

#include "abpump/errors.hpp"

namespace abpump {

std::string to_string(std::span<const std::uint8_t> occ) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (i) os << ',';
    os << static_cast<int>(occ[i]);
  }
  os << ']';
  return os.str();
}

std::size_t basis_dimension(std::size_t sites, std::size_t particles) {
  if (sites == 0) return 0;
  // binomial(N + L - 1, N) with the smaller of the two lower indices
  std::size_t n = particles + sites - 1;
  std::size_t k = std::min(particles, sites - 1);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

namespace {

// Emits compositions of `remaining` over sites [pos, L) in ascending
// lexicographic order: the leading site is filled last.
void fill(Occupation& current, std::size_t pos, std::size_t remaining,
          std::vector<Occupation>& out) {
  const std::size_t L = current.size();
  if (pos + 1 == L) {
    current[pos] = static_cast<std::uint8_t>(remaining);
    out.push_back(current);
    return;
  }
  for (std::size_t n = 0; n <= remaining; ++n) {
    current[pos] = static_cast<std::uint8_t>(n);
    fill(current, pos + 1, remaining - n, out);
  }
  current[pos] = 0;
}

}  // namespace

FockBasis::FockBasis(std::size_t sites, std::size_t particles)
    : sites_(sites), particles_(particles) {
  if (sites == 0) throw ConfigError("Fock basis needs at least one site (L >= 1)");
  if (particles > kMaxParticles)
    throw ConfigError("Fock basis supports at most 255 particles");
  states_.reserve(basis_dimension(sites, particles));
  Occupation current(sites, 0);
  fill(current, 0, particles, states_);
}

std::optional<std::size_t> FockBasis::find(std::span<const std::uint8_t> occ) const {
  if (occ.size() != sites_) return std::nullopt;
  auto it = std::lower_bound(states_.begin(), states_.end(), occ,
                             [](const Occupation& a, std::span<const std::uint8_t> b) {
                               return std::lexicographical_compare(a.begin(), a.end(),
                                                                   b.begin(), b.end());
                             });
  if (it == states_.end() || !std::equal(it->begin(), it->end(), occ.begin(), occ.end()))
    return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t FockBasis::index_of(std::span<const std::uint8_t> occ) const {
  if (auto k = find(occ)) return *k;
  std::size_t total = 0;
  for (auto n : occ) total += n;
  std::ostringstream os;
  os << "occupation " << to_string(occ) << " (L=" << occ.size() << ", N=" << total
     << ") is not in the basis with L=" << sites_ << ", N=" << particles_;
  throw LookupError(os.str());
}

FockBasis enumerate_basis(std::size_t sites, std::size_t particles) {
  return FockBasis(sites, particles);
}

TwoSpeciesBasis::TwoSpeciesBasis(std::size_t sites, std::size_t n_up, std::size_t n_down)
    : up_(sites, n_up), down_(sites, n_down) {
  if (n_up + n_down > FockBasis::kMaxParticles)
    throw ConfigError("two-species basis supports at most 255 particles in total");
}

std::size_t TwoSpeciesBasis::index_of(std::span<const std::uint8_t> up_occ,
                                      std::span<const std::uint8_t> down_occ) const {
  return index(up_.index_of(up_occ), down_.index_of(down_occ));
}

Occupation TwoSpeciesBasis::total_occupation(std::size_t k) const {
  Occupation total = up_.state(up_index(k));
  const Occupation& down = down_.state(down_index(k));
  for (std::size_t j = 0; j < total.size(); ++j) total[j] = static_cast<std::uint8_t>(total[j] + down[j]);
  return total;
}

TwoSpeciesBasis enumerate_two_species(std::size_t sites, std::size_t n_up, std::size_t n_down) {
  return TwoSpeciesBasis(sites, n_up, n_down);
}

}  // namespace abpump
