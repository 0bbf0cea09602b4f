#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "abpump/config.hpp"

namespace abpump {

/// One comparison against an expected value or bound.
struct Check {
  std::string name;
  double value = 0.0;
  std::string expectation;  ///< human-readable target, e.g. ">= 0.99"
  bool pass = false;
};

struct ReproduceReport {
  std::string id;
  std::vector<Check> checks;
  Json data;  ///< raw curves and tables behind the checks
  bool passed() const;
};

struct ReproduceOptions {
  double dt = 0.05;
  std::size_t workers = 1;
  /// Records are written to <out>/<id>/ when set.
  std::optional<std::filesystem::path> out;
};

/// fig2, fig4, fig5a, fig5b, fig6-central, fignoon, fig7a, fig7b, figB, figC, figD.
const std::vector<std::string>& preset_ids();

/// Runs a figure preset; LookupError listing the known ids for an unknown one.
ReproduceReport reproduce(const std::string& id, const ReproduceOptions& options = {});

/// Single-run config documents: fig2a (Phi = 0) and fig2b (Phi = 1/2).
Json simulation_preset(const std::string& name);
std::vector<std::string> simulation_preset_names();

void write_report(std::ostream& os, const ReproduceReport& report);

/// Flux samples k/M, k = 0..M-1.
std::vector<double> flux_grid(std::size_t m);

/// Drain transmission of ring-lead runs at every flux, one run per value.
struct RingRun {
  std::size_t ring_sites = 8;
  int particles = 1;
  double interaction = 0.0;
  double amplitude = 60.0;
  double frequency = 0.01;   ///< |Omega|; the band fixes the sign
  Band band = Band::plus;
  std::optional<double> t_end;
  double dt = 0.05;
  bool two_species = false;  ///< one up and one down particle instead of `particles`
};
RunConfig ring_config(const RingRun& run, double flux);
std::vector<double> ring_transmission(const RingRun& run, const std::vector<double>& flux,
                                      std::size_t workers = 1);

}  // namespace abpump
