#include "abpump/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "abpump/errors.hpp"
#include "abpump/experiments.hpp"
#include "abpump/junction.hpp"
#include "abpump/oracle.hpp"
#include "abpump/spectra.hpp"

namespace abpump {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

Check within(std::string name, double value, double target, double tol) {
  return {std::move(name), value, fmt(target) + " +- " + fmt(tol), std::abs(value - target) <= tol};
}

Check at_least(std::string name, double value, double bound) {
  return {std::move(name), value, ">= " + fmt(bound), value >= bound};
}

Check above(std::string name, double value, double bound) {
  return {std::move(name), value, "> " + fmt(bound), value > bound};
}

Check at_most(std::string name, double value, double bound) {
  return {std::move(name), value, "<= " + fmt(bound), value <= bound};
}

Check below(std::string name, double value, double bound) {
  return {std::move(name), value, "< " + fmt(bound), value < bound};
}

std::string label(const char* what, double x) { return std::string(what) + "=" + fmt(x); }

void save_curve(const ReproduceOptions& options, const std::string& id, const std::string& file,
                const TransmissionCurve& curve) {
  if (!options.out) return;
  const auto dir = *options.out / id;
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / file);
  write_transmission_csv(out, curve);
}

Json curve_json(const std::vector<double>& flux, const std::vector<double>& t) {
  return {{"flux", flux}, {"transmitted", t}};
}

// ---------------------------------------------------------------- presets

ReproduceReport fig2(const ReproduceOptions& o) {
  ReproduceReport r{"fig2", {}, {}};
  for (Band band : {Band::plus, Band::central_plus}) {
    RingRun run;
    run.ring_sites = 6;
    run.band = band;
    run.dt = o.dt;
    const std::string tag = "band " + to_string(band);
    const std::vector<double> flux{0.0, 0.5};
    const std::vector<double> t = ring_transmission(run, flux, o.workers);
    r.data[tag] = curve_json(flux, t);
    r.checks.push_back(at_least(tag + ": T(Phi=0)", t[0], 0.99));
    r.checks.push_back(at_most(tag + ": T(Phi=1/2)", t[1], 0.01));
  }

  // Return speed of the reflected wave at half flux (band +1).
  RingRun run;
  run.ring_sites = 6;
  run.dt = o.dt;
  RunConfig c = ring_config(run, 0.5);
  const double period = kTwoPi / run.frequency;
  c.evolution.t_end = 2.5 * period;
  c.evolution.record_stride = 2;
  const SimulationResult sim = simulate(c);
  const std::vector<int>& x = build_geometry(c.geometry).driving_offset;
  const auto in_a = centroid_crossing(sim.trace, x, 0.5, true);
  const auto in_b = centroid_crossing(sim.trace, x, 2.5, true);
  std::optional<double> out_a, out_b;
  if (in_b) out_a = centroid_crossing(sim.trace, x, 2.5, false, *in_b);
  if (out_a) out_b = centroid_crossing(sim.trace, x, 0.5, false, *out_a);
  double ratio = 0.0;
  if (in_a && in_b && out_a && out_b) ratio = (*in_b - *in_a) / (*out_b - *out_a);
  r.data["velocity"] = {{"in", {in_a.value_or(-1), in_b.value_or(-1)}},
                        {"out", {out_a.value_or(-1), out_b.value_or(-1)}}};
  r.checks.push_back(within("reflected/incoming centroid velocity", ratio, 2.0, 0.2));
  if (o.out) write_record(*o.out / "fig2" / "reflection", config_to_json(c), sim);
  return r;
}

ReproduceReport fig4(const ReproduceOptions& o) {
  ReproduceReport r{"fig4", {}, {}};
  RingRun run;
  run.ring_sites = 6;
  run.interaction = 1.0;
  run.amplitude = 40.0;
  run.band = Band::minus;
  run.dt = o.dt;
  run.particles = 3;
  const std::vector<double> f3{0.0, 0.5};
  const auto t3 = ring_transmission(run, f3, o.workers);
  r.data["N=3"] = curve_json(f3, t3);
  r.checks.push_back(within("N=3: T(0)", t3[0], 3.0, 0.1));
  r.checks.push_back(within("N=3: T(1/2)", t3[1], 2.0, 0.1));
  run.particles = 4;
  const std::vector<double> f4{0.0, 0.125, 0.25, 0.375, 0.5};
  const auto t4 = ring_transmission(run, f4, o.workers);
  r.data["N=4"] = curve_json(f4, t4);
  double worst = 0.0;
  for (double t : t4) worst = std::max(worst, std::abs(t - 4.0));
  r.checks.push_back(at_most("N=4: max |T - 4| over flux", worst, 0.1));
  return r;
}

// band +-1 on L_R = 8 over a 12-point flux grid
ReproduceReport fig5(const std::string& id, Band band, double u, const ReproduceOptions& o) {
  ReproduceReport r{id, {}, {}};
  const std::vector<double> flux = flux_grid(12);
  for (int n : {2, 3}) {
    RingRun run;
    run.ring_sites = 8;
    run.interaction = u;
    run.band = band;
    run.particles = n;
    run.dt = o.dt;
    const auto t = ring_transmission(run, flux, o.workers);
    TransmissionCurve curve{flux, t, flux_quantum({flux, t, std::nullopt})};
    save_curve(o, id, "transmission_N" + std::to_string(n) + ".csv", curve);
    const std::string tag = "N=" + std::to_string(n);
    r.data[tag] = curve_json(flux, t);
    if (band == Band::plus) {
      const int harmonic = dominant_harmonic(t);
      r.checks.push_back(within(tag + ": dominant flux harmonic", harmonic, n, 0.0));
      const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
      r.checks.push_back(within(tag + ": minimum depth", *hi - *lo, 1.0, 0.2));
    } else {
      double worst = 0.0;
      for (std::size_t k = 0; k < flux.size(); ++k)
        worst = std::max(worst, std::abs(t[k] - table_transmission(band, 8, n, flux[k], 1)));
      r.checks.push_back(below(tag + ": max |T - table|", worst, 0.1));
    }
  }
  return r;
}

ReproduceReport fig6_central(const ReproduceOptions& o) {
  ReproduceReport r{"fig6-central", {}, {}};
  const std::vector<double> flux = flux_grid(12);
  for (int n : {2, 3}) {
    RingRun run;
    run.ring_sites = 8;
    run.interaction = 0.1;
    run.band = Band::central_plus;
    run.particles = n;
    run.dt = o.dt;
    const auto t = ring_transmission(run, flux, o.workers);
    TransmissionCurve curve{flux, t, flux_quantum({flux, t, std::nullopt})};
    save_curve(o, "fig6-central", "transmission_N" + std::to_string(n) + ".csv", curve);
    const std::string tag = "N=" + std::to_string(n);
    r.data[tag] = curve_json(flux, t);
    r.checks.push_back(at_most(tag + ": max T over flux", *std::max_element(t.begin(), t.end()), 1.15));
    r.checks.push_back(within(tag + ": T(0)", t[0], n % 2 == 0 ? 0.0 : 1.0, 0.15));
  }
  return r;
}

ReproduceReport fignoon(const ReproduceOptions& o) {
  ReproduceReport r{"fignoon", {}, {}};
  JunctionSettings s;
  s.dt = o.dt;
  const std::vector<double> grid{0.0, 0.1, 0.25, 0.5, 1.0, 2.0};
  std::vector<FidelityPoint> points;
  for (int n : {2, 3, 4}) {
    double peak = 0.0;
    for (double u : grid) {
      const Fidelity f = run_noon_generation(n, u, s);
      points.push_back({n, u, f});
      peak = std::max(peak, f.phase_max);
      if (u == 0.5) r.checks.push_back(at_least("N=" + std::to_string(n) + ": F(U=0.5)", f.phase_max, 0.95));
    }
    r.checks.push_back(at_least("N=" + std::to_string(n) + ": peak F over U", peak, 0.95));
  }
  for (double u : {2.0, 4.0}) {
    const Fidelity f = run_noon_generation(6, u, s);
    points.push_back({6, u, f});
    r.checks.push_back(below("N=6: F(U=" + fmt(u) + ")", f.phase_max, 0.9));
  }
  Json table = Json::array();
  for (const FidelityPoint& p : points)
    table.push_back({p.particles, p.interaction, p.fidelity.raw, p.fidelity.phase_max});
  r.data["N,U,raw,phase_max"] = table;
  if (o.out) {
    std::filesystem::create_directories(*o.out / "fignoon");
    std::ofstream out(*o.out / "fignoon" / "fidelity.csv");
    write_fidelity_csv(out, points);
  }
  return r;
}

ReproduceReport fig7a(const ReproduceOptions&) {
  ReproduceReport r{"fig7a", {}, {}};
  const std::vector<double> fit_grid = log_space(10.0, 40.0, 7);
  for (int n : {2, 3}) {
    const GapScaling fit = fit_gap_scaling(n, fit_grid, Branch::top);
    const std::string tag = "N=" + std::to_string(n);
    r.checks.push_back(within(tag + ": top-branch U exponent", fit.u_exponent, n - 1, 0.2));
    r.checks.push_back(within(tag + ": top-branch J exponent", fit.j_exponent, n, 0.2));
    r.data[tag] = {{"U", fit.interactions}, {"gap", fit.gaps}};
  }
  // full curve for N = 3, showing the maximum below U = J
  Json curve = Json::array();
  double best_u = 0.0, best_gap = 0.0;
  for (double u : log_space(0.1, 40.0, 25)) {
    const double gap = two_site_gap(3, u, Branch::top).min_gap;
    curve.push_back({u, gap});
    if (gap > best_gap) {
      best_gap = gap;
      best_u = u;
    }
  }
  r.data["N=3 curve (U, gap)"] = curve;
  r.checks.push_back(at_most("N=3: U of largest top-branch gap", best_u, 1.0));
  return r;
}

ReproduceReport fig7b(const ReproduceOptions&) {
  ReproduceReport r{"fig7b", {}, {}};
  Json table = Json::array();
  for (int n = 1; n <= 5; ++n) {
    const GapReport g = two_site_gap(n, 10.0, Branch::bottom);
    const double law = gap_formula(Band::minus, n, 10.0).value;
    table.push_back({n, g.min_gap, law});
    r.checks.push_back(within("N=" + std::to_string(n) + ": gap / (2 sqrt(N) J) at U=10", g.min_gap / law, 1.0, 0.05));
  }
  r.data["N,gap,2sqrtN"] = table;
  for (int n : {2, 3, 4, 5}) {
    const GapScaling fit = fit_gap_scaling(n, log_space(5.0, 20.0, 5), Branch::bottom);
    r.checks.push_back(within("N=" + std::to_string(n) + ": bottom-branch U exponent", fit.u_exponent, 0.0, 0.05));
  }
  return r;
}

ReproduceReport figB(const ReproduceOptions& o) {
  ReproduceReport r{"figB", {}, {}};
  const std::vector<double> omegas{0.04, 0.02, 0.01};
  std::vector<double> t;
  for (double w : omegas) {
    RingRun run;
    run.ring_sites = 8;
    run.particles = 4;
    run.interaction = 0.5;
    run.band = Band::minus;
    run.frequency = w;
    run.t_end = 12.6 / w;
    run.dt = o.dt;
    t.push_back(ring_transmission(run, {0.0}, 1).front());
  }
  r.data["Omega, T"] = {{"Omega", omegas}, {"transmitted", t}};
  r.checks.push_back(above("band -1, N=4: T(Omega=0.01) - T(Omega=0.04)", t.back() - t.front(), 0.0));
  return r;
}

ReproduceReport figC(const ReproduceOptions& o) {
  ReproduceReport r{"figC", {}, {}};
  const std::vector<double> flux{1.0 / 6.0, 0.5};
  for (double u : {-0.5, 0.25, 0.5}) {
    RingRun run;
    run.ring_sites = 8;
    run.particles = 3;
    run.interaction = u;
    run.band = Band::plus;
    run.dt = o.dt;
    const auto t = ring_transmission(run, flux, o.workers);
    r.data[label("U", u)] = curve_json(flux, t);
    if (u > 0) {
      r.checks.push_back(above(label("U", u) + ": T(1/2) - T(1/6)", t[1] - t[0], 0.0));
    } else {
      r.checks.push_back(above(label("U", u) + ": T(1/6) - T(1/2)", t[0] - t[1], 0.0));
    }
  }
  return r;
}

ReproduceReport figD(const ReproduceOptions& o) {
  ReproduceReport r{"figD", {}, {}};
  const std::vector<double> flux = flux_grid(8);
  RingRun run;
  run.ring_sites = 8;
  run.interaction = 0.5;
  run.band = Band::minus;
  run.two_species = true;
  run.dt = o.dt;
  std::vector<double> t(flux.size()), bell(flux.size());
  parallel_for(flux.size(), o.workers, [&](std::size_t k) {
    const SimulationResult sim = simulate(ring_config(run, flux[k]));
    t[k] = sim.summary.at("transmitted").get<double>();
    bell[k] = sim.summary.at("fidelity_phase_max").get<double>();
  });
  r.data["two species"] = {{"flux", flux}, {"transmitted", t}, {"bell_fidelity", bell}};
  const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  r.checks.push_back(below("variation of T over flux", *hi - *lo, 0.05));
  r.checks.push_back(above("min Bell fidelity over flux", *std::min_element(bell.begin(), bell.end()), 0.9));
  return r;
}

}  // namespace

bool ReproduceReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<std::string>& preset_ids() {
  static const std::vector<std::string> ids = {"fig2",    "fig4",  "fig5a", "fig5b", "fig6-central", "fignoon",
                                               "fig7a",   "fig7b", "figB",  "figC",  "figD"};
  return ids;
}

std::vector<double> flux_grid(std::size_t m) {
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = static_cast<double>(k) / static_cast<double>(m);
  return out;
}

RunConfig ring_config(const RingRun& run, double flux) {
  RunConfig c;
  c.geometry.ring.ring_sites = run.ring_sites;
  c.geometry.ring.flux = flux;
  c.model.interaction = run.interaction;
  c.model.amplitude = run.amplitude;
  c.model.frequency = run.frequency;
  c.model.band = run.band;
  c.particles.n = static_cast<std::size_t>(run.particles);
  if (run.two_species) {
    c.particles.up = 1;
    c.particles.down = 1;
  }
  c.evolution.dt = run.dt;
  c.evolution.t_end = run.t_end;
  return c;
}

std::vector<double> ring_transmission(const RingRun& run, const std::vector<double>& flux,
                                      std::size_t workers) {
  std::vector<double> t(flux.size());
  parallel_for(flux.size(), workers, [&](std::size_t k) {
    t[k] = simulate(ring_config(run, flux[k])).summary.at("transmitted").get<double>();
  });
  return t;
}

ReproduceReport reproduce(const std::string& id, const ReproduceOptions& options) {
  ReproduceReport report;
  if (id == "fig2") report = fig2(options);
  else if (id == "fig4") report = fig4(options);
  else if (id == "fig5a") report = fig5("fig5a", Band::minus, 0.5, options);
  else if (id == "fig5b") report = fig5("fig5b", Band::plus, 0.1, options);
  else if (id == "fig6-central") report = fig6_central(options);
  else if (id == "fignoon") report = fignoon(options);
  else if (id == "fig7a") report = fig7a(options);
  else if (id == "fig7b") report = fig7b(options);
  else if (id == "figB") report = figB(options);
  else if (id == "figC") report = figC(options);
  else if (id == "figD") report = figD(options);
  else {
    std::string known;
    for (const std::string& k : preset_ids()) known += (known.empty() ? "" : ", ") + k;
    throw LookupError("unknown figure id '" + id + "'; available: " + known);
  }
  if (options.out) {
    const auto dir = *options.out / id;
    std::filesystem::create_directories(dir);
    Json doc;
    doc["id"] = id;
    doc["passed"] = report.passed();
    doc["dt"] = options.dt;
    Json checks = Json::array();
    for (const Check& c : report.checks)
      checks.push_back({{"name", c.name}, {"value", c.value}, {"expected", c.expectation}, {"pass", c.pass}});
    doc["checks"] = checks;
    doc["data"] = report.data;
    doc["version"] = kVersion;
    std::ofstream(dir / "report.json") << doc.dump(2) << '\n';
    std::ofstream text(dir / "report.txt");
    write_report(text, report);
  }
  return report;
}

void write_report(std::ostream& os, const ReproduceReport& report) {
  for (const Check& c : report.checks) {
    os << (c.pass ? "PASS " : "FAIL ") << report.id << " | " << c.name << " = " << std::setprecision(6)
       << c.value << " (expected " << c.expectation << ")\n";
  }
  os << report.id << ": " << (report.passed() ? "all checks passed" : "some checks failed") << '\n';
}

std::vector<std::string> simulation_preset_names() { return {"fig2a", "fig2b"}; }

Json simulation_preset(const std::string& name) {
  RingRun run;
  run.ring_sites = 6;
  if (name == "fig2a") return config_to_json(ring_config(run, 0.0));
  if (name == "fig2b") return config_to_json(ring_config(run, 0.5));
  throw LookupError("unknown simulation preset '" + name + "'; available: fig2a, fig2b");
}

}  // namespace abpump
