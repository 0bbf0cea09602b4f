#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "abpump/hamiltonian.hpp"
#include "abpump/lattice.hpp"
#include "abpump/propagator.hpp"
#include "abpump/spectra.hpp"

namespace abpump {

using Json = nlohmann::ordered_json;

enum class GeometryKind { ring_lead, chain, fork };

struct GeometryConfig {
  GeometryKind kind = GeometryKind::ring_lead;
  GeometrySpec ring;          ///< ring_lead
  std::size_t length = 2;     ///< chain
  int hub_offset = 0;         ///< fork
  int arm_offset = 1;         ///< fork
};

struct ModelConfig {
  double hopping = 1.0;
  double interaction = 0.0;
  double amplitude = 60.0;
  double frequency = 0.01;   ///< with a band preset only |frequency| is used
  std::optional<double> phase;
  std::optional<Band> band = Band::plus;
};

struct ParticleConfig {
  std::size_t n = 1;
  std::optional<std::size_t> up;
  std::optional<std::size_t> down;
  bool two_species() const { return up.has_value(); }
};

struct EvolutionConfig {
  double dt = 0.05;
  std::size_t record_stride = 20;
  std::optional<double> t_end;  ///< empty: arrival time at the drain
  StepMethod method = StepMethod::automatic;
  double krylov_tolerance = 1e-10;
  int krylov_dim = 30;
  std::size_t dense_threshold = 16;
};

struct SweepAxis {
  std::string name;  ///< dotted config key, e.g. "geometry.flux"
  std::vector<double> values;
};

struct SweepConfig {
  std::string run = "simulate";  ///< simulate | junction | gap
  std::vector<SweepAxis> axes;
};

struct JunctionConfig {
  std::string kind = "noon";  ///< noon | fork | transfer | bell
  Branch branch = Branch::top;
  double input_flux = 0.0;
};

struct SpectrumConfig {
  std::size_t points = 601;
  std::optional<std::size_t> lowest;
  std::size_t dense_cap = 3000;
  std::vector<double> fit_interactions;  ///< two-site gap fit when non-empty
};

/// Complete description of one run; round-trips through JSON.
struct RunConfig {
  GeometryConfig geometry;
  ModelConfig model;
  ParticleConfig particles;
  EvolutionConfig evolution;
  SweepConfig sweep;
  JunctionConfig junction;
  SpectrumConfig spectrum;
  std::string output = "out";
};

/// Parses and validates; ConfigError names the offending key.
RunConfig config_from_json(const Json& doc);
Json config_to_json(const RunConfig& config);

/// Reads a JSON file; an empty path gives an empty document (all defaults).
Json load_config_document(const std::string& path);

/// Sets a dotted key ("model.interaction") in `doc`. The value is parsed as
/// JSON when possible and kept as a string otherwise.
void apply_override(Json& doc, const std::string& key, const std::string& value);
/// Same, from "key=value".
void apply_override(Json& doc, const std::string& assignment);

GeometryKind parse_geometry_kind(const std::string& text);
std::string to_string(GeometryKind kind);
StepMethod parse_step_method(const std::string& text);
std::string to_string(StepMethod method);

}  // namespace abpump
