#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "abpump/config.hpp"
#include "abpump/observables.hpp"
#include "abpump/spectra.hpp"

namespace abpump {

inline constexpr const char* kVersion = "0.1.0";

LatticeGraph build_geometry(const GeometryConfig& geometry);

/// Model parameters with the band preset applied (phi0 and the sign of Omega).
ModelParams resolve_model(const ModelConfig& model);

/// Chern number implied by the model (preset, or a phase/sign matching one).
std::optional<int> implied_chern(const ModelConfig& model);

/// Explicit t_end or the drain arrival time of the ring-lead geometry.
double resolve_t_end(const RunConfig& config);

EvolutionPlan make_plan(const EvolutionConfig& evolution, double t_end);

struct SimulationResult {
  Json summary;
  DensityTrace trace;
};

/**
 * One trajectory. Summary keys: transmitted (drain lead), reflected (source
 * lead), ring, final_densities, centroid, t_end, steps, max_norm_drift and,
 * for two species, transmitted_up / transmitted_down / bell fidelity in the
 * ring arms at mid-ring time.
 */
SimulationResult simulate(const RunConfig& config);

/// Reduced-model run selected by config.junction.kind; returns its summary.
Json run_junction(const RunConfig& config);

struct SpectrumResult {
  SpectralFlow flow;
  Json report;  ///< per-branch gaps for two-site chains, optional scaling fit
};
SpectrumResult run_spectrum(const RunConfig& config);

/// Writes config.json, densities.csv and summary.json into `dir`.
void write_record(const std::filesystem::path& dir, const Json& config_echo,
                  const SimulationResult& result);

struct SweepPoint {
  std::size_t index = 0;
  std::vector<double> coordinates;
  bool ok = false;
  std::string error;
  Json summary;
};

struct SweepResult {
  std::vector<std::string> axes;
  std::vector<SweepPoint> points;  ///< index order
};

/**
 * Runs the cartesian product of the sweep axes (first axis slowest) on
 * `workers` threads. Each point gets <out>/<index>/ with its own config echo;
 * aggregate.csv is written after all points finish. Failed points are kept
 * with their error message.
 */
SweepResult run_sweep(const Json& document, std::size_t workers, const std::filesystem::path& out);

/// CSV: index,<axes...>,status,transmitted,reflected,fidelity_raw,fidelity_phase_max,min_gap,error
void write_aggregate_csv(std::ostream& os, const SweepResult& result);

/// Calls `task(i)` for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task);

}  // namespace abpump
