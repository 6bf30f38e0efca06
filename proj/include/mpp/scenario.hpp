#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpp/mpa.hpp"
#include "mpp/road.hpp"

namespace mpp {

enum class Strategy { Constant, Random, Constraint, Color, Optimal, Explore };

const char* strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(const std::string& name);
const std::vector<std::string>& strategy_names();

struct MapSpec {
  // loop: one circle at the origin.
  // crossing-circles: n_paths circles whose centers sit on a radius-sized
  //   ring, so every path runs through the origin.
  // crossing-chain: n_paths circles with centers center_spacing apart on
  //   the x axis; only neighboring paths overlap.
  // figure-eight: one self-crossing path of two lobes.
  std::string kind = "crossing-circles";
  double radius = 1.46;
  int n_paths = 3;
  double center_spacing = 2.6;
};

struct VehicleSpec {
  int path = 0;
  double start_fraction = 0.0;   // arc position as a fraction of path length
  double reference_speed = 0.8;  // must be an automaton speed level
};

struct ScenarioConfig {
  std::string name = "scenario";
  double step_duration = 0.2;
  int horizon = 6;
  double duration = 7.0;
  Strategy strategy = Strategy::Explore;
  std::vector<std::uint64_t> seeds = {1};
  int mcts_budget = 500;
  std::optional<int> class_cap;  // execute only this many schedule rows
  int orientation_cap = 24;      // optimal-strategy enumeration guard
  double lane_width = 0.5;
  bool lane_keeping = true;      // emit corridor walls as keep-outs
  bool synthetic_timing = true;  // solve time := expansions * fixed rate
  std::vector<double> speed_levels = {0.0, 0.4, 0.8, 1.2};
  std::vector<double> steering_levels = {-0.3, -0.15, 0.0, 0.15, 0.3};
  MapSpec map;
  std::vector<VehicleSpec> vehicles;  // defaults to one per path

  int n_steps() const;
  MpaConfig mpa_config() const;
};

/// Carries every violation found, not just the first.
struct ConfigError : std::runtime_error {
  std::vector<std::string> violations;
  explicit ConfigError(std::vector<std::string> v);
};

/// Validates and fills defaults; throws ConfigError listing all problems.
ScenarioConfig parse_config(const nlohmann::json& j);

/// Inverse of parse_config for report echoing; key order is fixed.
nlohmann::ordered_json config_to_json(const ScenarioConfig& c);

std::vector<LanePath> build_paths(const MapSpec& map);

}  // namespace mpp
