#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "abpump/hamiltonian.hpp"

namespace abpump {

enum class RingClass { any_even, four_n, four_n_plus_two };

RingClass ring_class(std::size_t ring_sites);
std::string to_string(RingClass cls);

enum class GapClass { sqrt_n, power_law, two_j };

/// One row of the transmission table for repulsive interaction.
struct TableRow {
  Band band;
  RingClass ring;
  std::function<double(double flux, int n)> even;
  std::function<double(double flux, int n)> odd;
  int chern;
  double phase;
  bool fractional_quantum;  ///< flux quantum 1/N instead of 1
  bool parity_effect;
  GapClass gap;
};

/// All interacting rows, in table order.
const std::vector<TableRow>& transmission_table();

/// Row for (band, L_R) at U > 0; LookupError("not tabulated") when absent.
const TableRow& table_row(Band band, std::size_t ring_sites);

/// Transmitted particles predicted by the table. For sign_u < 0 the bands are
/// exchanged (+1 <-> -1, 0+ <-> 0-) before the lookup.
double table_transmission(Band band, std::size_t ring_sites, int n, double flux, int sign_u);

/// Flux period of the row selected as in table_transmission.
double table_flux_quantum(Band band, std::size_t ring_sites, int n, int sign_u);

/// N cos^2(pi Phi).
double u0_transmission(int n, double flux);

/// sin^2(pi Phi): reflection of the three-level junction for the input
/// (|C1> + e^{i 2 pi Phi} |C2>)/sqrt(2).
double dark_state_reflection(double flux);

struct GapLaw {
  GapClass kind = GapClass::two_j;
  double value = 0.0;       ///< closed-form gap for sqrt_n and two_j, in units of J
  int j_exponent = 0;       ///< power_law: gap ~ J^a / U^b
  int u_exponent = 0;
};

/// Band-gap law of the table. N = 1 or U = 0 always gives 2J.
GapLaw gap_formula(Band band, int n, double interaction, double hopping = 1.0);

/// CSV with the transmission-curve schema (flux,transmitted,fitted_period).
void write_oracle_csv(std::ostream& os, Band band, std::size_t ring_sites, int n, int sign_u,
                      const std::vector<double>& flux);

}  // namespace abpump
