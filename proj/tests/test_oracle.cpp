#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "abpump/errors.hpp"
#include "abpump/oracle.hpp"

using namespace abpump;

namespace {

const Band kBands[] = {Band::plus, Band::minus, Band::central_plus, Band::central_minus};

double cos2(double x) { return std::pow(std::cos(std::numbers::pi * x), 2); }

}  // namespace

TEST_CASE("oracle: tabulated examples") {
  CHECK(table_transmission(Band::plus, 8, 3, 1.0 / 6.0, +1) == doctest::Approx(2.0));
  CHECK(table_transmission(Band::minus, 8, 4, 0.37, +1) == doctest::Approx(4.0));
  CHECK(table_transmission(Band::central_minus, 8, 2, 0.2, +1) == doctest::Approx(0.0));
  CHECK(table_transmission(Band::plus, 6, 2, 0.0, +1) == doctest::Approx(2.0));
  CHECK(table_flux_quantum(Band::plus, 8, 3, +1) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(table_transmission(Band::plus, 8, 3, 0.1, 0), ConfigError);
}

TEST_CASE("oracle: closed forms") {
  CHECK(u0_transmission(1, 0.0) == doctest::Approx(1.0));
  CHECK(u0_transmission(1, 0.5) == doctest::Approx(0.0));
  CHECK(u0_transmission(2, 0.25) == doctest::Approx(1.0));
  CHECK(dark_state_reflection(0.0) == doctest::Approx(0.0));
  CHECK(dark_state_reflection(0.5) == doctest::Approx(1.0));
  CHECK(dark_state_reflection(0.25) == doctest::Approx(0.5));
  for (double f = 0.0; f <= 1.0; f += 0.05) CHECK(dark_state_reflection(f) + cos2(f) == doctest::Approx(1.0));
}

TEST_CASE("oracle: gap laws") {
  const GapLaw bottom = gap_formula(Band::minus, 4, 10.0);
  CHECK(bottom.kind == GapClass::sqrt_n);
  CHECK(bottom.value == doctest::Approx(4.0));
  CHECK(gap_formula(Band::plus, 1, 0.0).value == doctest::Approx(2.0));
  const GapLaw top = gap_formula(Band::plus, 3, 10.0);
  CHECK(top.kind == GapClass::power_law);
  CHECK(top.j_exponent == 3);
  CHECK(top.u_exponent == 2);
}

TEST_CASE("oracle: ring classes and lookups") {
  CHECK(ring_class(8) == RingClass::four_n);
  CHECK(ring_class(6) == RingClass::four_n_plus_two);
  CHECK_THROWS_AS(ring_class(7), ConfigError);
  CHECK_THROWS_AS(ring_class(2), ConfigError);
  CHECK(transmission_table().size() == 6);
  for (Band b : kBands)
    for (std::size_t lr : {4u, 6u, 8u, 10u}) CHECK_NOTHROW(table_row(b, lr));
}

TEST_CASE("oracle: band swap under U -> -U") {
  for (Band b : kBands)
    for (std::size_t lr : {6u, 8u})
      for (int n = 1; n <= 6; ++n)
        for (double f = 0.0; f < 1.0; f += 0.07)
          CHECK(table_transmission(b, lr, n, f, -1) == table_transmission(swapped(b), lr, n, f, +1));
}

TEST_CASE("oracle: flux periodicity and bounds") {
  for (Band b : kBands)
    for (std::size_t lr : {6u, 8u})
      for (int n = 1; n <= 6; ++n) {
        const double q = table_flux_quantum(b, lr, n, +1);
        for (double f = 0.0; f < 1.0; f += 0.03) {
          const double t = table_transmission(b, lr, n, f, +1);
          CHECK(t == doctest::Approx(table_transmission(b, lr, n, f + q, +1)).epsilon(1e-12));
          CHECK(t >= -1e-12);
          CHECK(t <= n + 1e-12);
        }
      }
}

TEST_CASE("oracle: csv export") {
  std::ostringstream os;
  write_oracle_csv(os, Band::plus, 8, 2, +1, {0.0, 0.25});
  CHECK(os.str().rfind("flux,transmitted", 0) == 0);
}
