#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace abpump {

/// Particles per site. A site never holds more than the total particle number,
/// which is capped at 255.
using Occupation = std::vector<std::uint8_t>;

std::string to_string(std::span<const std::uint8_t> occ);

/**
 * Fixed-particle-number bosonic Fock basis on `sites` sites.
 *
 * States are stored in ascending lexicographic order of their occupation
 * vectors, so lookups are a binary search. Immutable after construction.
 */
class FockBasis {
 public:
  static constexpr std::size_t kMaxParticles = 255;

  FockBasis(std::size_t sites, std::size_t particles);

  std::size_t sites() const { return sites_; }
  std::size_t particles() const { return particles_; }
  std::size_t size() const { return states_.size(); }

  const Occupation& state(std::size_t k) const { return states_.at(k); }
  const std::vector<Occupation>& states() const { return states_; }

  /// Index of `occ`; throws LookupError when it has the wrong length or total.
  std::size_t index_of(std::span<const std::uint8_t> occ) const;
  std::optional<std::size_t> find(std::span<const std::uint8_t> occ) const;

  auto begin() const { return states_.begin(); }
  auto end() const { return states_.end(); }

 private:
  std::size_t sites_;
  std::size_t particles_;
  std::vector<Occupation> states_;
};

/// binomial(N + L - 1, N), the dimension of the basis.
std::size_t basis_dimension(std::size_t sites, std::size_t particles);

FockBasis enumerate_basis(std::size_t sites, std::size_t particles);

/**
 * Two distinguishable species on the same lattice, each with its own fixed
 * particle number. The product index is `up * down_dim + down` (up-major).
 */
class TwoSpeciesBasis {
 public:
  TwoSpeciesBasis(std::size_t sites, std::size_t n_up, std::size_t n_down);

  std::size_t sites() const { return up_.sites(); }
  std::size_t size() const { return up_.size() * down_.size(); }
  const FockBasis& up() const { return up_; }
  const FockBasis& down() const { return down_; }

  std::size_t index(std::size_t up_index, std::size_t down_index) const {
    return up_index * down_.size() + down_index;
  }
  std::size_t up_index(std::size_t k) const { return k / down_.size(); }
  std::size_t down_index(std::size_t k) const { return k % down_.size(); }

  std::size_t index_of(std::span<const std::uint8_t> up_occ,
                       std::span<const std::uint8_t> down_occ) const;

  /// Combined per-site occupation n_up + n_down of product state k.
  Occupation total_occupation(std::size_t k) const;

 private:
  FockBasis up_;
  FockBasis down_;
};

TwoSpeciesBasis enumerate_two_species(std::size_t sites, std::size_t n_up, std::size_t n_down);

}  // namespace abpump
