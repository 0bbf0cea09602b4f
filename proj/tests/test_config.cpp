#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "abpump/config.hpp"
#include "abpump/errors.hpp"
#include "abpump/experiments.hpp"

using namespace abpump;
namespace fs = std::filesystem;

namespace {

std::string error_of(const Json& doc) {
  try {
    config_from_json(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("abpump_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config: defaults and round trip") {
  const RunConfig defaults = config_from_json(Json::object());
  CHECK(defaults.geometry.ring.ring_sites == 8);
  CHECK(defaults.model.band == Band::plus);
  CHECK_FALSE(defaults.evolution.t_end.has_value());

  Json doc = Json::parse(R"({
    "geometry": {"ring_sites": 6, "flux": 0.25},
    "model": {"interaction": 0.5, "band": "0+"},
    "particles": {"n": 3},
    "evolution": {"dt": 0.02, "t_end": 100},
    "sweep": {"axes": [{"name": "geometry.flux", "start": 0, "stop": 1, "count": 4, "endpoint": false}]},
    "output": "somewhere"
  })");
  const RunConfig c = config_from_json(doc);
  CHECK(c.model.band == Band::central_plus);
  CHECK(c.sweep.axes.at(0).values == std::vector<double>{0.0, 0.25, 0.5, 0.75});
  const Json echoed = config_to_json(c);
  CHECK(config_to_json(config_from_json(echoed)) == echoed);
}

TEST_CASE("config: errors name the offending field") {
  CHECK(error_of(Json::parse(R"({"model": {"interactoin": 1}})")).find("model.interactoin") != std::string::npos);
  CHECK(error_of(Json::parse(R"({"modle": {}})")).find("modle") != std::string::npos);
  CHECK(error_of(Json::parse(R"({"model": {"phase": 1.0, "band": "+1"}})")).find("model.phase") != std::string::npos);
  CHECK(error_of(Json::parse(R"({"evolution": {"dt": -1}})")).find("evolution.dt") != std::string::npos);
  CHECK(error_of(Json::parse(R"({"model": {"interaction": "big"}})")).find("model.interaction") != std::string::npos);
  CHECK(error_of(Json::parse(R"({"particles": {"up": 1}})")).find("particles") != std::string::npos);
}

TEST_CASE("config: an explicit phase replaces the band preset") {
  const RunConfig c = config_from_json(Json::parse(R"({"model": {"phase": 1.0}})"));
  CHECK_FALSE(c.model.band.has_value());
  CHECK(resolve_model(c.model).phase == doctest::Approx(1.0));
  CHECK_FALSE(implied_chern(c.model).has_value());

  const ModelParams preset = resolve_model(config_from_json(Json::parse(R"({"model": {"band": "-1"}})")).model);
  CHECK(preset.phase == doctest::Approx(std::numbers::pi));
  CHECK(preset.frequency > 0.0);
}

TEST_CASE("config: overrides") {
  Json doc = Json::object();
  apply_override(doc, "geometry.flux=0.5");
  apply_override(doc, "model.band=0-");
  apply_override(doc, "output", "elsewhere");
  const RunConfig c = config_from_json(doc);
  CHECK(c.geometry.ring.flux == doctest::Approx(0.5));
  CHECK(c.model.band == Band::central_minus);
  CHECK(c.output == "elsewhere");
  CHECK_THROWS_AS(apply_override(doc, "no-equals-sign"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "geometry..flux=1"), ConfigError);
  CHECK_THROWS_AS(load_config_document("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config: automatic end time") {
  RunConfig c = config_from_json(Json::parse(R"({"geometry": {"ring_sites": 6}})"));
  CHECK(resolve_t_end(c) == doctest::Approx(5.0 / 3.0 * 2.0 * std::numbers::pi / 0.01));
  c.evolution.t_end = 12.0;
  CHECK(resolve_t_end(c) == doctest::Approx(12.0));
}

TEST_CASE("simulate and record a short run") {
  const RunConfig c = config_from_json(Json::parse(R"({
    "geometry": {"ring_sites": 4},
    "evolution": {"t_end": 20, "record_stride": 10}
  })"));
  const SimulationResult r = simulate(c);
  CHECK(r.summary.at("steps").get<std::size_t>() == 400);
  CHECK(r.trace.size() == 41);
  const fs::path dir = scratch("record");
  write_record(dir, config_to_json(c), r);
  CHECK(fs::exists(dir / "config.json"));
  CHECK(fs::exists(dir / "densities.csv"));
  CHECK(fs::exists(dir / "summary.json"));
  fs::remove_all(dir);
}

TEST_CASE("sweep isolates failing points") {
  const Json doc = Json::parse(R"({
    "geometry": {"ring_sites": 4},
    "evolution": {"t_end": 5},
    "sweep": {"axes": [{"name": "geometry.ring_sites", "values": [4, 5]}]}
  })");
  const fs::path dir = scratch("sweep");
  const SweepResult r = run_sweep(doc, 2, dir);
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[0].ok);
  CHECK_FALSE(r.points[1].ok);
  CHECK(fs::exists(dir / "aggregate.csv"));
  CHECK(fs::exists(dir / "1" / "error.txt"));
  fs::remove_all(dir);
}
