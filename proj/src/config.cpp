#include "abpump/config.hpp"

#include <fstream>
#include <set>

#include "abpump/errors.hpp"

namespace abpump {

namespace {

// Reads one JSON object section and rejects keys that were never consumed.
class Section {
 public:
  Section(const Json& doc, std::string name) : name_(std::move(name)) {
    if (doc.contains(name_)) {
      node_ = &doc.at(name_);
      if (!node_->is_object()) fail(name_, "must be an object");
    }
  }

  ~Section() noexcept(false) {
    if (node_ == nullptr || std::uncaught_exceptions() > 0) return;
    for (const auto& item : node_->items())
      if (!used_.count(item.key())) fail(path(item.key()), "unknown key");
  }

  const Json* get(const std::string& key) {
    used_.insert(key);
    if (node_ == nullptr || !node_->contains(key)) return nullptr;
    const Json& v = node_->at(key);
    return v.is_null() ? nullptr : &v;
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (const Json* v = get(key)) out = convert<T>(*v, key);
  }

  template <typename T>
  void read(const std::string& key, std::optional<T>& out) {
    used_.insert(key);
    if (node_ == nullptr || !node_->contains(key)) return;
    const Json& v = node_->at(key);
    if (v.is_null()) {
      out.reset();
    } else {
      out = convert<T>(v, key);
    }
  }

  template <typename T>
  T convert(const Json& v, const std::string& key) const {
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) fail(path(key), "must be a number");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) fail(path(key), "must be an integer");
        if constexpr (std::is_unsigned_v<T>)
          if (v.get<long long>() < 0) fail(path(key), "must be non-negative");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) fail(path(key), "must be a string");
      }
      return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
      fail(path(key), e.what());
    }
  }

  std::string path(const std::string& key) const { return name_ + "." + key; }

  [[noreturn]] static void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config field '" + key + "': " + what);
  }

 private:
  std::string name_;
  const Json* node_ = nullptr;
  std::set<std::string> used_;
};

std::string gauge_name(FluxGauge gauge) {
  return gauge == FluxGauge::uniform ? "uniform" : "single_bond";
}

FluxGauge parse_gauge(const std::string& text) {
  if (text == "uniform") return FluxGauge::uniform;
  if (text == "single_bond") return FluxGauge::single_bond;
  throw ConfigError("config field 'geometry.gauge': expected uniform or single_bond, got '" + text + "'");
}

std::vector<double> axis_values(const Json& axis, const std::string& where) {
  if (axis.contains("values")) {
    if (!axis.at("values").is_array()) Section::fail(where + ".values", "must be an array");
    std::vector<double> out;
    for (const Json& v : axis.at("values")) {
      if (!v.is_number()) Section::fail(where + ".values", "entries must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  for (const char* key : {"start", "stop", "count"})
    if (!axis.contains(key)) Section::fail(where, std::string("needs 'values' or start/stop/count (missing ") + key + ")");
  const double start = axis.at("start").get<double>();
  const double stop = axis.at("stop").get<double>();
  const auto count = axis.at("count").get<long long>();
  const bool endpoint = axis.value("endpoint", true);
  if (count < 1) Section::fail(where + ".count", "must be positive");
  std::vector<double> out;
  const double divisions = endpoint ? static_cast<double>(count - 1) : static_cast<double>(count);
  for (long long k = 0; k < count; ++k)
    out.push_back(divisions > 0 ? start + (stop - start) * static_cast<double>(k) / divisions : start);
  return out;
}

}  // namespace

GeometryKind parse_geometry_kind(const std::string& text) {
  if (text == "ring_lead") return GeometryKind::ring_lead;
  if (text == "chain") return GeometryKind::chain;
  if (text == "fork") return GeometryKind::fork;
  throw ConfigError("config field 'geometry.kind': expected ring_lead, chain or fork, got '" + text + "'");
}

std::string to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::ring_lead: return "ring_lead";
    case GeometryKind::chain: return "chain";
    case GeometryKind::fork: return "fork";
  }
  return "?";
}

StepMethod parse_step_method(const std::string& text) {
  if (text == "automatic") return StepMethod::automatic;
  if (text == "krylov") return StepMethod::krylov;
  if (text == "dense") return StepMethod::dense;
  throw ConfigError("config field 'evolution.method': expected automatic, krylov or dense, got '" + text + "'");
}

std::string to_string(StepMethod method) {
  switch (method) {
    case StepMethod::automatic: return "automatic";
    case StepMethod::krylov: return "krylov";
    case StepMethod::dense: return "dense";
  }
  return "?";
}

RunConfig config_from_json(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> sections = {"geometry", "model", "particles", "evolution",
                                                 "sweep", "junction", "spectrum", "output"};
  for (const auto& item : doc.items())
    if (!sections.count(item.key())) throw ConfigError("config field '" + item.key() + "': unknown section");

  RunConfig c;
  {
    Section s(doc, "geometry");
    if (const Json* v = s.get("kind")) c.geometry.kind = parse_geometry_kind(s.convert<std::string>(*v, "kind"));
    s.read("ring_sites", c.geometry.ring.ring_sites);
    s.read("source_sites", c.geometry.ring.source_sites);
    s.read("drain_sites", c.geometry.ring.drain_sites);
    s.read("flux", c.geometry.ring.flux);
    if (const Json* v = s.get("gauge")) c.geometry.ring.gauge = parse_gauge(s.convert<std::string>(*v, "gauge"));
    s.read("length", c.geometry.length);
    s.read("hub_offset", c.geometry.hub_offset);
    s.read("arm_offset", c.geometry.arm_offset);
  }
  {
    Section s(doc, "model");
    s.read("hopping", c.model.hopping);
    s.read("interaction", c.model.interaction);
    s.read("amplitude", c.model.amplitude);
    s.read("frequency", c.model.frequency);
    s.read("phase", c.model.phase);
    const bool band_given = doc.contains("model") && doc.at("model").contains("band");
    std::optional<std::string> band;
    s.read("band", band);
    if (band_given) {
      c.model.band.reset();
      if (band) c.model.band = parse_band(*band);
    } else if (c.model.phase) {
      c.model.band.reset();  // an explicit phase replaces the default preset
    }
  }
  {
    Section s(doc, "particles");
    s.read("n", c.particles.n);
    s.read("up", c.particles.up);
    s.read("down", c.particles.down);
  }
  {
    Section s(doc, "evolution");
    s.read("dt", c.evolution.dt);
    s.read("record_stride", c.evolution.record_stride);
    if (const Json* v = s.get("t_end")) {
      if (v->is_string()) {
        if (v->get<std::string>() != "auto") Section::fail("evolution.t_end", "must be a number or \"auto\"");
      } else {
        c.evolution.t_end = s.convert<double>(*v, "t_end");
      }
    }
    if (const Json* v = s.get("method")) c.evolution.method = parse_step_method(s.convert<std::string>(*v, "method"));
    s.read("krylov_tolerance", c.evolution.krylov_tolerance);
    s.read("krylov_dim", c.evolution.krylov_dim);
    s.read("dense_threshold", c.evolution.dense_threshold);
  }
  {
    Section s(doc, "sweep");
    s.read("run", c.sweep.run);
    if (const Json* v = s.get("axes")) {
      if (!v->is_array()) Section::fail("sweep.axes", "must be an array");
      for (std::size_t i = 0; i < v->size(); ++i) {
        const Json& axis = v->at(i);
        const std::string where = "sweep.axes[" + std::to_string(i) + "]";
        if (!axis.is_object() || !axis.contains("name") || !axis.at("name").is_string())
          Section::fail(where, "needs a string 'name'");
        c.sweep.axes.push_back({axis.at("name").get<std::string>(), axis_values(axis, where)});
      }
    }
  }
  {
    Section s(doc, "junction");
    s.read("kind", c.junction.kind);
    if (const Json* v = s.get("branch")) c.junction.branch = parse_branch(s.convert<std::string>(*v, "branch"));
    s.read("input_flux", c.junction.input_flux);
  }
  {
    Section s(doc, "spectrum");
    s.read("points", c.spectrum.points);
    s.read("lowest", c.spectrum.lowest);
    s.read("dense_cap", c.spectrum.dense_cap);
    s.read("fit_interactions", c.spectrum.fit_interactions);
  }
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) Section::fail("output", "must be a string");
    c.output = doc.at("output").get<std::string>();
  }

  // cross-field checks
  if (c.model.phase && c.model.band)
    throw ConfigError("config field 'model.phase': exactly one of model.phase and model.band may be set");
  if (c.particles.up.has_value() != c.particles.down.has_value())
    throw ConfigError("config field 'particles.up': up and down must be given together");
  if (c.particles.n == 0 && !c.particles.two_species())
    throw ConfigError("config field 'particles.n': must be positive");
  if (!(c.evolution.dt > 0.0)) throw ConfigError("config field 'evolution.dt': must be positive");
  if (c.evolution.t_end && !(*c.evolution.t_end > 0.0))
    throw ConfigError("config field 'evolution.t_end': must be positive");
  if (c.sweep.axes.size() > 2) throw ConfigError("config field 'sweep.axes': at most two axes");
  for (const SweepAxis& axis : c.sweep.axes)
    if (axis.values.empty()) throw ConfigError("config field 'sweep.axes': axis '" + axis.name + "' is empty");
  static const std::set<std::string> runs = {"simulate", "junction", "gap"};
  if (!runs.count(c.sweep.run))
    throw ConfigError("config field 'sweep.run': expected simulate, junction or gap");
  static const std::set<std::string> kinds = {"noon", "fork", "transfer", "bell"};
  if (!kinds.count(c.junction.kind))
    throw ConfigError("config field 'junction.kind': expected noon, fork, transfer or bell");
  return c;
}

Json config_to_json(const RunConfig& c) {
  Json doc;
  doc["geometry"] = {{"kind", to_string(c.geometry.kind)},
                     {"ring_sites", c.geometry.ring.ring_sites},
                     {"source_sites", c.geometry.ring.source_sites},
                     {"drain_sites", c.geometry.ring.drain_sites},
                     {"flux", c.geometry.ring.flux},
                     {"gauge", gauge_name(c.geometry.ring.gauge)},
                     {"length", c.geometry.length},
                     {"hub_offset", c.geometry.hub_offset},
                     {"arm_offset", c.geometry.arm_offset}};
  Json model = {{"hopping", c.model.hopping},
                {"interaction", c.model.interaction},
                {"amplitude", c.model.amplitude},
                {"frequency", c.model.frequency}};
  model["phase"] = c.model.phase ? Json(*c.model.phase) : Json(nullptr);
  model["band"] = c.model.band ? Json(to_string(*c.model.band)) : Json(nullptr);
  doc["model"] = model;
  Json particles = {{"n", c.particles.n}};
  if (c.particles.two_species()) {
    particles["up"] = *c.particles.up;
    particles["down"] = *c.particles.down;
  }
  doc["particles"] = particles;
  Json evolution = {{"dt", c.evolution.dt}, {"record_stride", c.evolution.record_stride}};
  evolution["t_end"] = c.evolution.t_end ? Json(*c.evolution.t_end) : Json("auto");
  evolution["method"] = to_string(c.evolution.method);
  evolution["krylov_tolerance"] = c.evolution.krylov_tolerance;
  evolution["krylov_dim"] = c.evolution.krylov_dim;
  evolution["dense_threshold"] = c.evolution.dense_threshold;
  doc["evolution"] = evolution;
  Json axes = Json::array();
  for (const SweepAxis& axis : c.sweep.axes) axes.push_back({{"name", axis.name}, {"values", axis.values}});
  doc["sweep"] = {{"run", c.sweep.run}, {"axes", axes}};
  doc["junction"] = {{"kind", c.junction.kind},
                     {"branch", to_string(c.junction.branch)},
                     {"input_flux", c.junction.input_flux}};
  Json spectrum = {{"points", c.spectrum.points}};
  spectrum["lowest"] = c.spectrum.lowest ? Json(*c.spectrum.lowest) : Json(nullptr);
  spectrum["dense_cap"] = c.spectrum.dense_cap;
  spectrum["fit_interactions"] = c.spectrum.fit_interactions;
  doc["spectrum"] = spectrum;
  doc["output"] = c.output;
  return doc;
}

Json load_config_document(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

void apply_override(Json& doc, const std::string& key, const std::string& value) {
  if (key.empty()) throw ConfigError("empty override key");
  Json parsed;
  try {
    parsed = Json::parse(value);
  } catch (const nlohmann::json::parse_error&) {
    parsed = value;
  }
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("malformed override key '" + key + "'");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("override key '" + key + "' descends into a non-object");
      *node = Json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = parsed;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

void apply_override(Json& doc, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  apply_override(doc, assignment.substr(0, eq), assignment.substr(eq + 1));
}

}  // namespace abpump
