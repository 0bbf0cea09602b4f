// Command-line front end: simulate, sweep, spectrum, junction, reproduce.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 failed comparison (reproduce only).

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abpump/config.hpp"
#include "abpump/errors.hpp"
#include "abpump/experiments.hpp"
#include "abpump/reproduce.hpp"
#include "abpump/spectra.hpp"

namespace fs = std::filesystem;
using namespace abpump;

namespace {

struct Common {
  std::string config_path;
  std::string out;
  std::size_t workers = 1;
  double dt = 0.0;
  std::vector<std::string> overrides;
  std::string preset;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON run configuration");
  cmd->add_option("--out", c.out, "output directory (overrides the config)");
  cmd->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--dt", c.dt, "time step (overrides evolution.dt)")->check(CLI::PositiveNumber);
  cmd->add_option("--set", c.overrides, "override a config key: section.key=value")->take_all();
}

Json document_for(const Common& c) {
  Json doc = c.preset.empty() ? load_config_document(c.config_path) : simulation_preset(c.preset);
  if (!c.preset.empty() && !c.config_path.empty())
    throw ConfigError("--preset and --config are mutually exclusive");
  for (const std::string& s : c.overrides) apply_override(doc, s);
  if (c.dt > 0.0) apply_override(doc, "evolution.dt", std::to_string(c.dt));
  if (!c.out.empty()) doc["output"] = c.out;
  return doc;
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

void print_warnings(const Json& summary) {
  if (!summary.contains("warnings")) return;
  for (const auto& w : summary.at("warnings")) std::cerr << "warning: " << w.get<std::string>() << '\n';
}

int cmd_simulate(const Common& c) {
  const Json doc = document_for(c);
  const RunConfig config = config_from_json(doc);
  const SimulationResult result = simulate(config);
  print_warnings(result.summary);
  write_record(config.output, config_to_json(config), result);
  if (result.summary.contains("transmitted"))
    std::cout << "transmitted " << result.summary.at("transmitted").get<double>() << '\n';
  std::cout << "record written to " << config.output << '\n';
  return 0;
}

int cmd_sweep(const Common& c) {
  const Json doc = document_for(c);
  const RunConfig config = config_from_json(doc);
  const SweepResult result = run_sweep(doc, c.workers, config.output);
  std::size_t failed = 0;
  for (const SweepPoint& p : result.points) failed += p.ok ? 0 : 1;
  std::cout << result.points.size() << " points, " << failed << " failed; aggregate at "
            << (fs::path(config.output) / "aggregate.csv").string() << '\n';
  return failed == 0 ? 0 : 2;
}

int cmd_spectrum(const Common& c) {
  const RunConfig config = config_from_json(document_for(c));
  const SpectrumResult result = run_spectrum(config);
  fs::create_directories(config.output);
  {
    std::ofstream out(fs::path(config.output) / "spectrum.csv");
    write_spectrum_csv(out, result.flow);
  }
  write_json(fs::path(config.output) / "config.json", config_to_json(config));
  write_json(fs::path(config.output) / "gaps.json", result.report);
  std::cout << result.report.dump(2) << '\n';
  return 0;
}

int cmd_junction(const Common& c) {
  const RunConfig config = config_from_json(document_for(c));
  Json summary = run_junction(config);
  fs::create_directories(config.output);
  write_json(fs::path(config.output) / "config.json", config_to_json(config));
  if (summary.contains("history")) {
    std::ofstream out(fs::path(config.output) / "history.csv");
    out << "time";
    const std::size_t n = config.particles.n;
    for (std::size_t k = 0; k <= n; ++k) out << ",p_" << k << '_' << (n - k);
    out << '\n' << std::setprecision(12);
    const Json& h = summary.at("history");
    for (std::size_t i = 0; i < h.at("times").size(); ++i) {
      out << h.at("times")[i].get<double>();
      for (const auto& p : h.at("probabilities")[i]) out << ',' << p.get<double>();
      out << '\n';
    }
    summary.erase("history");
  }
  write_json(fs::path(config.output) / "summary.json", summary);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_reproduce(const Common& c, const std::vector<std::string>& ids) {
  ReproduceOptions options;
  options.workers = c.workers;
  if (c.dt > 0.0) options.dt = c.dt;
  options.out = c.out.empty() ? fs::path("out") : fs::path(c.out);
  const std::vector<std::string> todo = (ids.size() == 1 && ids[0] == "all") ? preset_ids() : ids;
  bool ok = true;
  for (const std::string& id : todo) {
    const ReproduceReport report = reproduce(id, options);
    write_report(std::cout, report);
    ok = ok && report.passed();
  }
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topologically pumped interacting bosons in Aharonov-Bohm ring-lead lattices"};
  app.require_subcommand(1);

  Common simulate_opts, sweep_opts, spectrum_opts, junction_opts, reproduce_opts;
  CLI::App* sim = app.add_subcommand("simulate", "single trajectory");
  add_common(sim, simulate_opts);
  sim->add_option("--preset", simulate_opts.preset, "named config (fig2a, fig2b)");
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over config.sweep.axes");
  add_common(sweep, sweep_opts);
  CLI::App* spec = app.add_subcommand("spectrum", "instantaneous spectrum along the driving phase");
  add_common(spec, spectrum_opts);
  CLI::App* junc = app.add_subcommand("junction", "reduced two-site / fork experiments");
  add_common(junc, junction_opts);
  CLI::App* repro = app.add_subcommand("reproduce", "run figure presets and compare with expectations");
  add_common(repro, reproduce_opts);
  std::vector<std::string> ids;
  repro->add_option("ids", ids, "figure ids, or 'all'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sim) return cmd_simulate(simulate_opts);
    if (*sweep) return cmd_sweep(sweep_opts);
    if (*spec) return cmd_spectrum(spectrum_opts);
    if (*junc) return cmd_junction(junction_opts);
    if (*repro) return cmd_reproduce(reproduce_opts, ids);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const LookupError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
