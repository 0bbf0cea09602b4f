#include "abpump/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "abpump/errors.hpp"
#include "abpump/junction.hpp"
#include "abpump/propagator.hpp"

namespace abpump {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double period_of(double frequency) { return kTwoPi / std::abs(frequency); }

std::vector<std::size_t> sites_with_role(const LatticeGraph& g, SiteRole role) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < g.n_sites; ++j)
    if (g.roles[j] == role) out.push_back(j);
  return out;
}

double sum_over(const std::vector<double>& n, const std::vector<std::size_t>& sites) {
  double s = 0.0;
  for (std::size_t j : sites) s += n.at(j);
  return s;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

JunctionSettings junction_settings(const RunConfig& c) {
  JunctionSettings s;
  s.hopping = c.model.hopping;
  s.amplitude = c.model.amplitude;
  s.frequency = std::abs(c.model.frequency);
  s.dt = c.evolution.dt;
  return s;
}

void put_optional(std::ostream& os, const Json& summary, const char* key) {
  os << ',';
  if (summary.contains(key) && summary.at(key).is_number()) os << summary.at(key).get<double>();
}

}  // namespace

LatticeGraph build_geometry(const GeometryConfig& geometry) {
  switch (geometry.kind) {
    case GeometryKind::ring_lead: return build_ring_lead(geometry.ring);
    case GeometryKind::chain: return build_chain(geometry.length);
    case GeometryKind::fork: return build_fork(geometry.hub_offset, geometry.arm_offset);
  }
  throw ConfigError("unknown geometry kind");
}

ModelParams resolve_model(const ModelConfig& model) {
  if (model.phase.has_value() == model.band.has_value())
    throw ConfigError("config field 'model.band': exactly one of model.phase and model.band must be set");
  ModelParams p;
  p.hopping = model.hopping;
  p.interaction = model.interaction;
  p.amplitude = model.amplitude;
  p.frequency = model.frequency;
  if (model.band) {
    p.frequency = std::abs(model.frequency);
    apply_preset(p, *model.band);
  } else {
    p.phase = *model.phase;
  }
  return p;
}

std::optional<int> implied_chern(const ModelConfig& model) {
  if (model.band) return band_preset(*model.band).chern;
  if (!model.phase || model.frequency == 0.0) return std::nullopt;
  for (Band b : {Band::plus, Band::minus, Band::central_plus, Band::central_minus}) {
    const BandPreset preset = band_preset(b);
    const double diff = std::remainder(*model.phase - preset.phase, kTwoPi);
    if (std::abs(diff) < 1e-9 && (model.frequency > 0) == (preset.frequency_sign > 0)) return preset.chern;
  }
  return std::nullopt;
}

double resolve_t_end(const RunConfig& config) {
  if (config.evolution.t_end) return *config.evolution.t_end;
  if (config.geometry.kind != GeometryKind::ring_lead)
    throw ConfigError("config field 'evolution.t_end': auto needs the ring_lead geometry");
  const std::optional<int> chern = implied_chern(config.model);
  if (!chern)
    throw ConfigError("config field 'evolution.t_end': auto needs a band preset (or a matching phase)");
  if (config.model.frequency == 0.0) throw ConfigError("config field 'model.frequency': must be non-zero");
  const double hops = static_cast<double>(source_drain_path_length(config.geometry.ring.ring_sites));
  return hops / (3.0 * std::abs(*chern)) * period_of(config.model.frequency);
}

EvolutionPlan make_plan(const EvolutionConfig& evolution, double t_end) {
  EvolutionPlan plan;
  plan.t_end = t_end;
  plan.dt = evolution.dt;
  plan.record_stride = evolution.record_stride;
  plan.method = evolution.method;
  plan.krylov.tolerance = evolution.krylov_tolerance;
  plan.krylov.max_dim = evolution.krylov_dim;
  plan.dense_threshold = evolution.dense_threshold;
  return plan;
}

SimulationResult simulate(const RunConfig& config) {
  const LatticeGraph graph = build_geometry(config.geometry);
  const ModelParams params = resolve_model(config.model);
  const double t_end = resolve_t_end(config);
  const EvolutionPlan plan = make_plan(config.evolution, t_end);
  const std::vector<int>& position = graph.driving_offset;

  SimulationResult result;
  Json& summary = result.summary;
  summary["warnings"] = regime_warnings(params);
  EvolutionStats stats;
  std::vector<double> final_n;

  if (config.particles.two_species()) {
    const TwoSpeciesBasis basis(graph.n_sites, *config.particles.up, *config.particles.down);
    const SparseHamiltonian h = assemble_two_species(graph, basis, params);
    const bool bell = graph.source_site && basis.up().particles() == 1 && basis.down().particles() == 1 &&
                      config.geometry.kind == GeometryKind::ring_lead;
    const std::optional<int> chern = implied_chern(config.model);
    double t_mid = -1.0;
    if (bell && chern) {
      const double hops = static_cast<double>(config.geometry.ring.ring_sites) / 4.0 + 1.0;
      t_mid = hops / (3.0 * std::abs(*chern)) * period_of(params.frequency);
    }
    Fidelity bell_at_mid;
    double best_distance = std::numeric_limits<double>::infinity();
    const State psi = evolve(
        initial_state(basis, graph), h, plan,
        [&](double t, const State& s) {
          result.trace.push(t, site_densities(s, basis));
          if (t_mid >= 0.0 && std::abs(t - t_mid) < best_distance) {
            best_distance = std::abs(t - t_mid);
            bell_at_mid = bell_fidelity(s, basis, graph.upper_arm(), graph.lower_arm());
          }
        },
        &stats);
    final_n = site_densities(psi, basis);
    if (!graph.drain_lead.empty()) {
      summary["transmitted_up"] = sum_over(species_densities(psi, basis, true), graph.drain_lead);
      summary["transmitted_down"] = sum_over(species_densities(psi, basis, false), graph.drain_lead);
    }
    if (t_mid >= 0.0) {
      summary["bell_time"] = t_mid;
      summary["fidelity_raw"] = bell_at_mid.raw;
      summary["fidelity_phase_max"] = bell_at_mid.phase_max;
    }
  } else {
    const FockBasis basis(graph.n_sites, config.particles.n);
    const SparseHamiltonian h = assemble(graph, basis, params);
    const State psi = evolve(
        initial_state(basis, graph), h, plan,
        [&](double t, const State& s) { result.trace.push(t, site_densities(s, basis)); }, &stats);
    final_n = site_densities(psi, basis);
  }

  if (config.geometry.kind == GeometryKind::ring_lead) {
    summary["transmitted"] = sum_over(final_n, graph.drain_lead);
    summary["reflected"] = sum_over(final_n, sites_with_role(graph, SiteRole::source));
    summary["ring"] = sum_over(final_n, graph.ring_sites);
  }
  summary["final_densities"] = final_n;
  summary["centroid"] = centroid(final_n, position);
  summary["t_end"] = t_end;
  summary["dt"] = plan.dt;
  summary["steps"] = stats.steps;
  summary["krylov_substeps"] = stats.krylov_substeps;
  summary["max_norm_drift"] = stats.max_norm_drift;
  return result;
}

Json run_junction(const RunConfig& config) {
  const JunctionSettings settings = junction_settings(config);
  const int n = static_cast<int>(config.particles.n);
  const double u = config.model.interaction;
  Json summary;
  summary["kind"] = config.junction.kind;
  if (config.junction.kind == "noon") {
    const Fidelity f = run_noon_generation(n, u, settings);
    summary["fidelity_raw"] = f.raw;
    summary["fidelity_phase_max"] = f.phase_max;
  } else if (config.junction.kind == "fork") {
    const ForkTransmission t = run_fork_interference(config.junction.input_flux, u, n, settings);
    summary["transmitted"] = t.transmitted;
    summary["reflected"] = t.reflected;
  } else if (config.junction.kind == "transfer") {
    const TransferResult r = run_two_site_transfer(n, u, config.junction.branch, settings);
    summary["branch"] = to_string(config.junction.branch);
    summary["transfer_fidelity"] = r.transfer_fidelity;
    summary["max_intermediate"] = r.max_intermediate;
    summary["adiabatic"] = r.adiabatic;
    summary["history"] = {{"times", r.times}, {"probabilities", r.probabilities}};
  } else if (config.junction.kind == "bell") {
    const Fidelity f = run_bell_generation(u, settings);
    summary["fidelity_raw"] = f.raw;
    summary["fidelity_phase_max"] = f.phase_max;
  } else {
    throw ConfigError("config field 'junction.kind': unknown kind '" + config.junction.kind + "'");
  }
  return summary;
}

SpectrumResult run_spectrum(const RunConfig& config) {
  if (config.particles.two_species()) throw ConfigError("config field 'particles.up': spectra need one species");
  const LatticeGraph graph = build_geometry(config.geometry);
  const FockBasis basis(graph.n_sites, config.particles.n);
  ModelParams params = resolve_model(config.model);
  SpectrumOptions options;
  options.dense_cap = config.spectrum.dense_cap;
  options.lowest = config.spectrum.lowest;

  SpectrumResult result;
  result.flow = instantaneous_spectrum(graph, basis, params, phase_grid(config.spectrum.points), options);
  Json spacing = Json::array();
  for (Eigen::Index k = 0; k + 1 < result.flow.levels.cols(); ++k)
    spacing.push_back((result.flow.levels.col(k + 1) - result.flow.levels.col(k)).minCoeff());
  result.report["min_level_spacing"] = spacing;

  const bool two_site = config.geometry.kind == GeometryKind::chain && config.geometry.length == 2;
  if (two_site) {
    GapOptions gap_options;
    gap_options.amplitude = params.amplitude;
    gap_options.grid = config.spectrum.points;
    const int n = static_cast<int>(config.particles.n);
    for (Branch b : {Branch::top, Branch::bottom}) {
      const GapReport r = two_site_gap(n, params.interaction, b, params.hopping, gap_options);
      result.report["gaps"][to_string(b)] = {{"min_gap", r.min_gap}, {"phase_at_min", r.phase_at_min}};
      if (config.spectrum.fit_interactions.size() >= 3) {
        const GapScaling fit = fit_gap_scaling(n, config.spectrum.fit_interactions, b, gap_options);
        result.report["fit"][to_string(b)] = {{"u_exponent", fit.u_exponent},
                                               {"j_exponent", fit.j_exponent},
                                               {"interactions", fit.interactions},
                                               {"gaps", fit.gaps}};
      }
    }
  }
  return result;
}

void write_record(const std::filesystem::path& dir, const Json& config_echo,
                  const SimulationResult& result) {
  std::filesystem::create_directories(dir);
  write_text(dir / "config.json", config_echo.dump(2) + "\n");
  {
    std::ofstream out(dir / "densities.csv");
    if (!out) throw ConfigError("cannot write '" + (dir / "densities.csv").string() + "'");
    write_density_csv(out, result.trace);
  }
  Json summary = result.summary;
  summary["provenance"] = {{"version", kVersion}, {"timestamp", utc_timestamp()}};
  write_text(dir / "summary.json", summary.dump(2) + "\n");
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  for (std::thread& t : pool) t.join();
}

SweepResult run_sweep(const Json& document, std::size_t workers, const std::filesystem::path& out) {
  const RunConfig base = config_from_json(document);
  if (base.sweep.axes.empty()) throw ConfigError("config field 'sweep.axes': a sweep needs at least one axis");

  SweepResult result;
  std::size_t total = 1;
  for (const SweepAxis& axis : base.sweep.axes) {
    result.axes.push_back(axis.name);
    total *= axis.values.size();
  }
  result.points.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    SweepPoint& p = result.points[i];
    p.index = i;
    std::size_t rest = i;
    p.coordinates.resize(base.sweep.axes.size());
    for (std::size_t a = base.sweep.axes.size(); a-- > 0;) {
      const auto& values = base.sweep.axes[a].values;
      p.coordinates[a] = values[rest % values.size()];
      rest /= values.size();
    }
  }

  std::filesystem::create_directories(out);
  std::mutex io;
  parallel_for(total, workers, [&](std::size_t i) {
    SweepPoint& p = result.points[i];
    const std::filesystem::path dir = out / std::to_string(i);
    try {
      Json doc = document;
      for (std::size_t a = 0; a < p.coordinates.size(); ++a) {
        const double v = p.coordinates[a];
        // integral values stay integers so that counts (particles.n) parse
        const Json value = std::floor(v) == v && std::abs(v) < 1e15 ? Json(static_cast<long long>(v)) : Json(v);
        apply_override(doc, base.sweep.axes[a].name, value.dump());
      }
      doc.erase("sweep");
      const RunConfig config = config_from_json(doc);
      const Json echo = config_to_json(config);
      if (base.sweep.run == "simulate") {
        SimulationResult r = simulate(config);
        p.summary = r.summary;
        std::lock_guard<std::mutex> lock(io);
        write_record(dir, echo, r);
      } else {
        if (base.sweep.run == "junction") {
          p.summary = run_junction(config);
        } else {
          GapOptions options;
          options.amplitude = config.model.amplitude;
          const GapReport g = two_site_gap(static_cast<int>(config.particles.n), config.model.interaction,
                                           config.junction.branch, config.model.hopping, options);
          p.summary = {{"min_gap", g.min_gap}, {"phase_at_min", g.phase_at_min}};
        }
        std::lock_guard<std::mutex> lock(io);
        std::filesystem::create_directories(dir);
        write_text(dir / "config.json", echo.dump(2) + "\n");
        write_text(dir / "summary.json", p.summary.dump(2) + "\n");
      }
      p.ok = true;
    } catch (const std::exception& e) {
      p.ok = false;
      p.error = e.what();
      std::lock_guard<std::mutex> lock(io);
      std::filesystem::create_directories(dir);
      write_text(dir / "error.txt", p.error + "\n");
    }
  });

  std::ofstream agg(out / "aggregate.csv");
  if (!agg) throw ConfigError("cannot write '" + (out / "aggregate.csv").string() + "'");
  write_aggregate_csv(agg, result);
  return result;
}

void write_aggregate_csv(std::ostream& os, const SweepResult& result) {
  os << "index";
  for (const std::string& axis : result.axes) os << ',' << axis;
  os << ",status,transmitted,reflected,fidelity_raw,fidelity_phase_max,min_gap,error\n";
  os << std::setprecision(12);
  for (const SweepPoint& p : result.points) {
    os << p.index;
    for (double c : p.coordinates) os << ',' << c;
    os << ',' << (p.ok ? "ok" : "failed");
    for (const char* key : {"transmitted", "reflected", "fidelity_raw", "fidelity_phase_max", "min_gap"})
      put_optional(os, p.summary, key);
    std::string err = p.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    os << ',' << err << '\n';
  }
}

}  // namespace abpump
