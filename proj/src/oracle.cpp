#include "abpump/oracle.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "abpump/errors.hpp"

namespace abpump {

namespace {

constexpr double kPi = std::numbers::pi;

double cos2(double x) {
  const double c = std::cos(x);
  return c * c;
}

double sin2(double x) {
  const double s = std::sin(x);
  return s * s;
}

double nearly_full_fractional(double flux, int n) { return n - 1 + cos2(kPi * flux * n); }
double nearly_full(double flux, int n) { return n - 1 + cos2(kPi * flux); }
double all(double, int n) { return n; }
double none(double, int) { return 0.0; }
double one_fractional_sin(double flux, int n) { return sin2(kPi * flux * n); }
double one_fractional_cos(double flux, int n) { return cos2(kPi * flux * n); }
double one(double flux, int) { return cos2(kPi * flux); }

}  // namespace

RingClass ring_class(std::size_t ring_sites) {
  if (ring_sites < 4 || ring_sites % 2 != 0)
    throw ConfigError("ring length must be even and at least 4");
  return ring_sites % 4 == 0 ? RingClass::four_n : RingClass::four_n_plus_two;
}

std::string to_string(RingClass cls) {
  switch (cls) {
    case RingClass::any_even: return "2n";
    case RingClass::four_n: return "4n";
    case RingClass::four_n_plus_two: return "4n+2";
  }
  return "?";
}

const std::vector<TableRow>& transmission_table() {
  static const std::vector<TableRow> rows = {
      {Band::plus, RingClass::any_even, nearly_full_fractional, nearly_full_fractional, -1, 0.0,
       true, false, GapClass::power_law},
      {Band::central_plus, RingClass::four_n_plus_two, nearly_full_fractional,
       nearly_full_fractional, 2, kPi / 2, true, false, GapClass::power_law},
      {Band::central_plus, RingClass::four_n, one_fractional_sin, one_fractional_cos, 2, kPi / 2,
       true, true, GapClass::power_law},
      {Band::central_minus, RingClass::four_n, none, one, 2, -kPi / 2, false, true,
       GapClass::power_law},
      {Band::central_minus, RingClass::four_n_plus_two, all, nearly_full, 2, -kPi / 2, false, true,
       GapClass::power_law},
      {Band::minus, RingClass::any_even, all, nearly_full, -1, kPi, false, true, GapClass::sqrt_n},
  };
  return rows;
}

const TableRow& table_row(Band band, std::size_t ring_sites) {
  const RingClass cls = ring_class(ring_sites);
  for (const TableRow& row : transmission_table()) {
    if (row.band != band) continue;
    if (row.ring == RingClass::any_even || row.ring == cls) return row;
  }
  throw LookupError("not tabulated: band " + to_string(band) + " with ring class " + to_string(cls));
}

double table_transmission(Band band, std::size_t ring_sites, int n, double flux, int sign_u) {
  if (sign_u == 0) throw ConfigError("table applies to non-zero interaction; use u0_transmission");
  if (n < 1) throw ConfigError("particle number must be positive");
  const Band effective = sign_u > 0 ? band : swapped(band);
  const TableRow& row = table_row(effective, ring_sites);
  return n % 2 == 0 ? row.even(flux, n) : row.odd(flux, n);
}

double table_flux_quantum(Band band, std::size_t ring_sites, int n, int sign_u) {
  if (sign_u == 0) return 1.0;
  const Band effective = sign_u > 0 ? band : swapped(band);
  return table_row(effective, ring_sites).fractional_quantum ? 1.0 / n : 1.0;
}

double u0_transmission(int n, double flux) { return n * cos2(kPi * flux); }

double dark_state_reflection(double flux) { return sin2(kPi * flux); }

GapLaw gap_formula(Band band, int n, double interaction, double hopping) {
  if (n < 1) throw ConfigError("particle number must be positive");
  GapLaw law;
  if (n == 1 || interaction == 0.0) {
    law.kind = GapClass::two_j;
    law.value = 2.0 * hopping;
    return law;
  }
  const Band effective = interaction > 0 ? band : swapped(band);
  if (effective == Band::minus) {
    law.kind = GapClass::sqrt_n;
    law.value = 2.0 * std::sqrt(static_cast<double>(n)) * hopping;
  } else {
    law.kind = GapClass::power_law;
    law.j_exponent = n;
    law.u_exponent = n - 1;
  }
  return law;
}

void write_oracle_csv(std::ostream& os, Band band, std::size_t ring_sites, int n, int sign_u,
                      const std::vector<double>& flux) {
  const double quantum = table_flux_quantum(band, ring_sites, n, sign_u);
  os << "flux,transmitted,fitted_period\n" << std::setprecision(12);
  for (double phi : flux) {
    const double t = sign_u == 0 ? u0_transmission(n, phi)
                                 : table_transmission(band, ring_sites, n, phi, sign_u);
    os << phi << ',' << t << ',' << quantum << '\n';
  }
}

}  // namespace abpump
