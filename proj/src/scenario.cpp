#include "mpp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mpp {

namespace {

const std::vector<std::string> kStrategyNames = {
    "constant", "random", "constraint", "color", "optimal", "explore"};

}  // namespace

const char* strategy_name(Strategy s) {
  return kStrategyNames.at(static_cast<std::size_t>(s)).c_str();
}

std::optional<Strategy> strategy_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kStrategyNames.size(); ++i)
    if (kStrategyNames[i] == name) return static_cast<Strategy>(i);
  return std::nullopt;
}

const std::vector<std::string>& strategy_names() { return kStrategyNames; }

int ScenarioConfig::n_steps() const {
  return static_cast<int>(std::lround(duration / step_duration));
}

MpaConfig ScenarioConfig::mpa_config() const {
  MpaConfig c = MpaConfig::small_vehicle();
  c.speed_levels = speed_levels;
  c.steering_levels = steering_levels;
  c.step_duration = step_duration;
  c.horizon = horizon;
  return c;
}

ConfigError::ConfigError(std::vector<std::string> v)
    : std::runtime_error(
          v.empty() ? "invalid configuration"
                    : "invalid configuration: " + v.front() +
                          (v.size() > 1 ? " (and " +
                                              std::to_string(v.size() - 1) +
                                              " more)"
                                        : "")),
      violations(std::move(v)) {}

namespace {

bool level_listed(double value, const std::vector<double>& levels) {
  for (double l : levels)
    if (std::abs(l - value) <= 1e-12) return true;
  return false;
}

void check_known_keys(const nlohmann::json& j, const std::set<std::string>& known,
                      const std::string& where, std::vector<std::string>& errs) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key))
      errs.push_back("unknown field \"" + where + key + "\"");
  }
}

}  // namespace

ScenarioConfig parse_config(const nlohmann::json& j) {
  std::vector<std::string> errs;
  if (!j.is_object()) throw ConfigError({"configuration must be a JSON object"});

  check_known_keys(
      j,
      {"schema", "name", "step_duration", "horizon", "duration", "strategy",
       "seeds", "mcts_budget", "class_cap", "orientation_cap", "lane_width",
       "lane_keeping", "synthetic_timing", "speed_levels", "steering_levels",
       "map", "vehicles", "n_vehicles"},
      "", errs);

  if (!j.contains("schema") || !j.at("schema").is_number_integer() ||
      j.at("schema").get<int>() != 1)
    errs.push_back("field \"schema\" must be present and equal to 1");

  ScenarioConfig c;
  const auto read_double = [&](const char* key, double& out, double lo,
                               const char* what) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) {
      errs.push_back(std::string("field \"") + key + "\" must be a number");
      return;
    }
    out = j.at(key).get<double>();
    if (!(out > lo))
      errs.push_back(std::string("field \"") + key + "\" must be " + what);
  };
  const auto read_int = [&](const char* key, int& out, int lo) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_integer()) {
      errs.push_back(std::string("field \"") + key + "\" must be an integer");
      return;
    }
    out = j.at(key).get<int>();
    if (out < lo)
      errs.push_back(std::string("field \"") + key + "\" must be at least " +
                     std::to_string(lo));
  };

  if (j.contains("name")) {
    if (j.at("name").is_string())
      c.name = j.at("name").get<std::string>();
    else
      errs.push_back("field \"name\" must be a string");
  }
  read_double("step_duration", c.step_duration, 0.0, "positive");
  read_int("horizon", c.horizon, 1);
  read_double("duration", c.duration, 0.0, "positive");
  read_int("mcts_budget", c.mcts_budget, 1);
  read_int("orientation_cap", c.orientation_cap, 1);
  read_double("lane_width", c.lane_width, 0.15, "wider than the vehicle");

  if (j.contains("strategy")) {
    const std::string name = j.at("strategy").is_string()
                                 ? j.at("strategy").get<std::string>()
                                 : std::string();
    const auto s = strategy_from_name(name);
    if (!s) {
      std::string valid;
      for (const std::string& n : kStrategyNames)
        valid += (valid.empty() ? "" : ", ") + n;
      errs.push_back("field \"strategy\": unknown value \"" + name +
                     "\"; valid options: " + valid);
    } else {
      c.strategy = *s;
    }
  }

  if (j.contains("seeds")) {
    if (!j.at("seeds").is_array() || j.at("seeds").empty()) {
      errs.push_back("field \"seeds\" must be a non-empty array");
    } else {
      c.seeds.clear();
      for (const auto& s : j.at("seeds")) {
        if (s.is_number_unsigned() || s.is_number_integer())
          c.seeds.push_back(s.get<std::uint64_t>());
        else
          errs.push_back("field \"seeds\" must contain integers");
      }
    }
  }

  if (j.contains("class_cap") && !j.at("class_cap").is_null()) {
    int cap = 0;
    if (j.at("class_cap").is_number_integer() &&
        (cap = j.at("class_cap").get<int>()) >= 1)
      c.class_cap = cap;
    else
      errs.push_back("field \"class_cap\" must be null or an integer >= 1");
  }
  if (j.contains("lane_keeping")) {
    if (j.at("lane_keeping").is_boolean())
      c.lane_keeping = j.at("lane_keeping").get<bool>();
    else
      errs.push_back("field \"lane_keeping\" must be a boolean");
  }
  if (j.contains("synthetic_timing")) {
    if (j.at("synthetic_timing").is_boolean())
      c.synthetic_timing = j.at("synthetic_timing").get<bool>();
    else
      errs.push_back("field \"synthetic_timing\" must be a boolean");
  }

  const auto read_levels = [&](const char* key, std::vector<double>& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_array() || j.at(key).empty()) {
      errs.push_back(std::string("field \"") + key +
                     "\" must be a non-empty array of numbers");
      return;
    }
    out.clear();
    for (const auto& v : j.at(key)) {
      if (v.is_number())
        out.push_back(v.get<double>());
      else
        errs.push_back(std::string("field \"") + key + "\" must be numeric");
    }
  };
  read_levels("speed_levels", c.speed_levels);
  read_levels("steering_levels", c.steering_levels);
  if (c.speed_levels.empty() || c.speed_levels.front() != 0.0)
    errs.push_back("field \"speed_levels\" must start at 0");
  if (!std::is_sorted(c.speed_levels.begin(), c.speed_levels.end()) ||
      !std::is_sorted(c.steering_levels.begin(), c.steering_levels.end()))
    errs.push_back("level lists must be ascending");

  if (j.contains("map")) {
    const nlohmann::json& m = j.at("map");
    if (!m.is_object()) {
      errs.push_back("field \"map\" must be an object");
    } else {
      check_known_keys(m, {"kind", "radius", "n_paths", "center_spacing"},
                       "map.", errs);
      if (m.contains("kind")) {
        if (m.at("kind").is_string())
          c.map.kind = m.at("kind").get<std::string>();
        else
          errs.push_back("field \"map.kind\" must be a string");
      }
      if (m.contains("radius")) {
        if (m.at("radius").is_number() &&
            (c.map.radius = m.at("radius").get<double>()) > 0.0) {
        } else {
          errs.push_back("field \"map.radius\" must be a positive number");
        }
      }
      if (m.contains("n_paths")) {
        if (m.at("n_paths").is_number_integer() &&
            (c.map.n_paths = m.at("n_paths").get<int>()) >= 1) {
        } else {
          errs.push_back("field \"map.n_paths\" must be an integer >= 1");
        }
      }
      if (m.contains("center_spacing")) {
        if (m.at("center_spacing").is_number() &&
            (c.map.center_spacing = m.at("center_spacing").get<double>()) >
                0.0) {
        } else {
          errs.push_back("field \"map.center_spacing\" must be positive");
        }
      }
    }
  }
  const std::set<std::string> kinds = {"loop", "crossing-circles",
                                       "crossing-chain", "figure-eight"};
  if (!kinds.count(c.map.kind)) {
    std::string valid;
    for (const std::string& k : kinds) valid += (valid.empty() ? "" : ", ") + k;
    errs.push_back("field \"map.kind\": unknown value \"" + c.map.kind +
                   "\"; valid options: " + valid);
  }
  if ((c.map.kind == "loop" || c.map.kind == "figure-eight") &&
      c.map.n_paths != 1) {
    if (j.contains("map") && j.at("map").contains("n_paths"))
      errs.push_back("field \"map.n_paths\" must be 1 for kind \"" +
                     c.map.kind + "\"");
    c.map.n_paths = 1;
  }

  if (j.contains("vehicles")) {
    if (!j.at("vehicles").is_array() || j.at("vehicles").empty()) {
      errs.push_back("field \"vehicles\" must be a non-empty array");
    } else {
      c.vehicles.clear();
      int idx = 0;
      for (const auto& v : j.at("vehicles")) {
        const std::string where = "vehicles[" + std::to_string(idx) + "].";
        VehicleSpec spec;
        if (!v.is_object()) {
          errs.push_back("field \"vehicles[" + std::to_string(idx) +
                         "]\" must be an object");
        } else {
          check_known_keys(
              v, {"path", "start_fraction", "reference_speed"}, where, errs);
          if (v.contains("path")) {
            if (v.at("path").is_number_integer())
              spec.path = v.at("path").get<int>();
            else
              errs.push_back("field \"" + where + "path\" must be an integer");
          }
          if (v.contains("start_fraction")) {
            if (v.at("start_fraction").is_number())
              spec.start_fraction = v.at("start_fraction").get<double>();
            else
              errs.push_back("field \"" + where +
                             "start_fraction\" must be a number");
          }
          if (v.contains("reference_speed")) {
            if (v.at("reference_speed").is_number())
              spec.reference_speed = v.at("reference_speed").get<double>();
            else
              errs.push_back("field \"" + where +
                             "reference_speed\" must be a number");
          }
        }
        c.vehicles.push_back(spec);
        ++idx;
      }
    }
  } else {
    // One vehicle per path, staggered along the arc.
    for (int p = 0; p < c.map.n_paths; ++p)
      c.vehicles.push_back(
          {p, std::fmod(0.78 + 0.07 * p, 1.0), 0.8});
  }

  if (j.contains("n_vehicles")) {
    if (!j.at("n_vehicles").is_number_integer() ||
        j.at("n_vehicles").get<int>() !=
            static_cast<int>(c.vehicles.size()))
      errs.push_back(
          "field \"n_vehicles\" disagrees with the vehicles array");
  }

  for (std::size_t i = 0; i < c.vehicles.size(); ++i) {
    const VehicleSpec& v = c.vehicles[i];
    const std::string where = "vehicles[" + std::to_string(i) + "].";
    if (v.path < 0 || v.path >= c.map.n_paths)
      errs.push_back("field \"" + where + "path\" out of range; map has " +
                     std::to_string(c.map.n_paths) + " paths");
    if (v.start_fraction < 0.0 || v.start_fraction >= 1.0)
      errs.push_back("field \"" + where + "start_fraction\" must be in [0,1)");
    if (!level_listed(v.reference_speed, c.speed_levels))
      errs.push_back("field \"" + where +
                     "reference_speed\" is not an automaton speed level");
    for (std::size_t k = 0; k < i; ++k)
      if (c.vehicles[k].path == v.path &&
          std::abs(c.vehicles[k].start_fraction - v.start_fraction) < 1e-9)
        errs.push_back("vehicles " + std::to_string(k) + " and " +
                       std::to_string(i) + " share the same start");
  }

  const double steps = c.duration / c.step_duration;
  if (std::abs(steps - std::round(steps)) > 1e-9 || std::round(steps) < 1.0)
    errs.push_back(
        "duration must be a positive whole number of step_duration intervals");

  if (!errs.empty()) throw ConfigError(std::move(errs));
  return c;
}

nlohmann::ordered_json config_to_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["name"] = c.name;
  j["step_duration"] = c.step_duration;
  j["horizon"] = c.horizon;
  j["duration"] = c.duration;
  j["strategy"] = strategy_name(c.strategy);
  j["seeds"] = c.seeds;
  j["mcts_budget"] = c.mcts_budget;
  if (c.class_cap)
    j["class_cap"] = *c.class_cap;
  else
    j["class_cap"] = nullptr;
  j["orientation_cap"] = c.orientation_cap;
  j["lane_width"] = c.lane_width;
  j["lane_keeping"] = c.lane_keeping;
  j["synthetic_timing"] = c.synthetic_timing;
  j["speed_levels"] = c.speed_levels;
  j["steering_levels"] = c.steering_levels;
  j["map"] = {{"kind", c.map.kind},
              {"radius", c.map.radius},
              {"n_paths", c.map.n_paths},
              {"center_spacing", c.map.center_spacing}};
  j["vehicles"] = nlohmann::ordered_json::array();
  for (const VehicleSpec& v : c.vehicles)
    j["vehicles"].push_back({{"path", v.path},
                             {"start_fraction", v.start_fraction},
                             {"reference_speed", v.reference_speed}});
  return j;
}

std::vector<LanePath> build_paths(const MapSpec& map) {
  std::vector<LanePath> paths;
  if (map.kind == "loop") {
    paths.push_back(circle_path({0.0, 0.0}, map.radius));
  } else if (map.kind == "figure-eight") {
    paths.push_back(figure_eight_path({0.0, 0.0}, map.radius));
  } else if (map.kind == "crossing-circles") {
    // Centers on a ring of the same radius, so every circle passes through
    // the origin; phase puts arc position 0 at that shared crossing.
    for (int p = 0; p < map.n_paths; ++p) {
      const double alpha = 2.0 * M_PI * p / map.n_paths;
      const Vec2 center{map.radius * std::cos(alpha),
                        map.radius * std::sin(alpha)};
      paths.push_back(circle_path(center, map.radius, alpha + M_PI));
    }
  } else if (map.kind == "crossing-chain") {
    for (int p = 0; p < map.n_paths; ++p) {
      const double cx =
          (p - (map.n_paths - 1) / 2.0) * map.center_spacing;
      paths.push_back(circle_path({cx, 0.0}, map.radius));
    }
  } else {
    throw std::invalid_argument("unknown map kind \"" + map.kind + "\"");
  }
  return paths;
}

}  // namespace mpp
