#include <doctest.h>

#include <set>
#include <sstream>

#include "abpump/errors.hpp"
#include "abpump/fock_basis.hpp"

using namespace abpump;

namespace {

// Independent count: number of compositions of n into l non-negative parts.
std::size_t count_compositions(std::size_t l, std::size_t n) {
  if (l == 1) return 1;
  std::size_t total = 0;
  for (std::size_t k = 0; k <= n; ++k) total += count_compositions(l - 1, n - k);
  return total;
}

}  // namespace

TEST_CASE("fock basis: small examples") {
  const FockBasis one(1, 1);
  REQUIRE(one.size() == 1);
  CHECK(one.state(0) == Occupation{1});

  CHECK(FockBasis(3, 2).size() == 6);
  CHECK(FockBasis(10, 4).size() == 715);
  CHECK(basis_dimension(10, 4) == 715);
}

TEST_CASE("fock basis: index lookup") {
  const FockBasis b = enumerate_basis(2, 1);
  const Occupation target{1, 0};
  const std::size_t k = b.index_of(target);
  CHECK(b.state(k) == target);

  const FockBasis b4(4, 3);
  for (std::size_t i = 0; i < b4.size(); ++i) CHECK(b4.index_of(b4.state(i)) == i);
}

TEST_CASE("fock basis: lookup errors") {
  const FockBasis b(3, 2);
  CHECK_THROWS_AS(b.index_of(Occupation{3, 0, 0}), LookupError);
  CHECK_THROWS_AS(b.index_of(Occupation{1, 1}), LookupError);
  CHECK_FALSE(b.find(Occupation{0, 0, 1}).has_value());
  CHECK_THROWS_AS(FockBasis(0, 1), ConfigError);
  CHECK_THROWS_AS(FockBasis(2, 300), ConfigError);
}

TEST_CASE("fock basis: lexicographic order and invariants") {
  const FockBasis b(4, 3);
  for (std::size_t i = 1; i < b.size(); ++i) CHECK(b.state(i - 1) < b.state(i));
  for (const Occupation& occ : b) {
    int sum = 0;
    for (auto n : occ) sum += n;
    CHECK(sum == 3);
  }
}

TEST_CASE("fock basis: dimension formula, exhaustive for L <= 12, N <= 6") {
  for (std::size_t l = 1; l <= 12; ++l)
    for (std::size_t n = 0; n <= 6; ++n) {
      CHECK(basis_dimension(l, n) == count_compositions(l, n));
      if (basis_dimension(l, n) < 20000) CHECK(FockBasis(l, n).size() == count_compositions(l, n));
    }
}

TEST_CASE("fock basis: enumeration is stable across constructions") {
  auto serialize = [](const FockBasis& b) {
    std::ostringstream os;
    for (const Occupation& occ : b) os << to_string(occ) << ';';
    return os.str();
  };
  CHECK(serialize(FockBasis(5, 3)) == serialize(FockBasis(5, 3)));
  CHECK(to_string(Occupation{1, 0, 2}) == "[1,0,2]");
}

TEST_CASE("two-species basis") {
  CHECK(TwoSpeciesBasis(2, 1, 1).size() == 4);
  CHECK(TwoSpeciesBasis(10, 1, 1).size() == 100);
  const TwoSpeciesBasis degenerate(3, 1, 0);
  CHECK(degenerate.size() == 3);

  const TwoSpeciesBasis b(3, 2, 1);
  CHECK(b.size() == FockBasis(3, 2).size() * FockBasis(3, 1).size());
  std::set<std::size_t> seen;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const Occupation& up = b.up().state(b.up_index(k));
    const Occupation& down = b.down().state(b.down_index(k));
    CHECK(b.index_of(up, down) == k);
    seen.insert(k);
    const Occupation total = b.total_occupation(k);
    for (std::size_t j = 0; j < 3; ++j) CHECK(total[j] == up[j] + down[j]);
  }
  CHECK(seen.size() == b.size());
}
