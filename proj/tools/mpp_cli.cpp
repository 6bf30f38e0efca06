// Command line front end: scenario simulation, strategy comparison,
// schedule inspection, grid instance classification and plot-data export.
//
// Every failure path prints one machine-readable JSON object to stderr:
//   {"schema": 1, "error": <kind>, "message": <text>, "details": {...}}
// Exit codes: 0 success, 1 usage or data error, 2 collision audit failure.
// The MPP_LOG environment variable ("info" or "debug") enables progress
// output on stderr; stdout carries only the commands' primary results.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpp/error.hpp"
#include "mpp/mapf.hpp"
#include "mpp/schedule.hpp"
#include "mpp/sim.hpp"

namespace {

int log_level() {
  const char* env = std::getenv("MPP_LOG");
  if (!env) return 0;
  const std::string value(env);
  if (value == "debug") return 2;
  if (value == "quiet" || value == "0" || value.empty()) return 0;
  return 1;
}

void log_info(const std::string& line) {
  if (log_level() >= 1) std::cerr << "[mpp] " << line << '\n';
}

void log_debug(const std::string& line) {
  if (log_level() >= 2) std::cerr << "[mpp] " << line << '\n';
}

[[nodiscard]] int fail(const std::string& kind, const std::string& message,
                       nlohmann::ordered_json details = nlohmann::ordered_json::object(),
                       int code = 1) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["error"] = kind;
  j["message"] = message;
  if (!details.empty()) j["details"] = std::move(details);
  std::cerr << j.dump() << '\n';
  return code;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open \"" + path + "\"");
  return nlohmann::json::parse(in);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot write \"" + path.string() + "\"");
  }
  out << body;
}

/// Config names feed output file names; anything exotic becomes '-'.
std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '_' || c == '-';
    out += keep ? c : '-';
  }
  return out.empty() ? std::string("scenario") : out;
}

mpp::ScenarioConfig load_config(const std::string& path,
                                const std::optional<std::uint64_t>& seed) {
  mpp::ScenarioConfig config = mpp::parse_config(read_json_file(path));
  if (seed) config.seeds = {*seed};
  return config;
}

struct CollisionFailure {
  mpp::CollisionError error;
  std::uint64_t seed;
  std::string strategy;
};

int report_collision(const CollisionFailure& f) {
  return fail("collision", f.error.what(),
              {{"seed", f.seed},
               {"strategy", f.strategy},
               {"step", f.error.step},
               {"first", f.error.first},
               {"second", f.error.second},
               {"sample", f.error.sample}},
              2);
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::optional<std::uint64_t>& seed) {
  const mpp::ScenarioConfig config = load_config(config_path, seed);
  std::filesystem::create_directories(out_dir);
  log_info("generating motion primitive automaton");
  const auto mpa = mpp::MotionPrimitiveAutomaton::generate(config.mpa_config());
  const std::string stem = sanitize(config.name);
  for (const std::uint64_t s : config.seeds) {
    log_info("running seed " + std::to_string(s));
    mpp::ExperimentResult result;
    try {
      result = mpp::run_experiment(config, s, mpa);
    } catch (const mpp::CollisionError& e) {
      return report_collision({e, s, mpp::strategy_name(config.strategy)});
    }
    const auto base = std::filesystem::path(out_dir) /
                      (stem + "-seed" + std::to_string(s));
    write_file(base.string() + ".report.json",
               mpp::experiment_report(result).dump(2) + "\n");
    write_file(base.string() + ".steps.csv", mpp::report_csv(result));
    write_file(base.string() + ".traces.jsonl",
               mpp::plan_traces_jsonl(result));
    std::ostringstream line;
    line << "seed " << s << ": steps=" << result.steps.size()
         << " total_cost=" << result.total_cost
         << " networked_time=" << result.total_time
         << " -> " << base.string() << ".report.json";
    std::cout << line.str() << '\n';
    log_debug("wrote " + base.string() + ".{report.json,steps.csv,traces.jsonl}");
  }
  return 0;
}

int cmd_compare(const std::string& config_path, const std::string& list,
                const std::optional<std::uint64_t>& seed,
                const std::string& json_path) {
  const mpp::ScenarioConfig base = load_config(config_path, seed);

  std::vector<mpp::Strategy> strategies;
  std::stringstream split(list);
  for (std::string token; std::getline(split, token, ',');) {
    const auto s = mpp::strategy_from_name(token);
    if (!s) {
      std::string valid;
      for (const std::string& n : mpp::strategy_names()) {
        valid += (valid.empty() ? "" : ", ") + n;
      }
      return fail("config", "unknown strategy \"" + token + "\"",
                  {{"valid", valid}});
    }
    if (std::find(strategies.begin(), strategies.end(), *s) ==
        strategies.end()) {
      strategies.push_back(*s);
    }
  }
  if (strategies.empty()) {
    return fail("config", "option --strategies needs at least one name");
  }
  // The constant strategy anchors the normalization, so it always runs.
  if (std::find(strategies.begin(), strategies.end(),
                mpp::Strategy::Constant) == strategies.end()) {
    strategies.insert(strategies.begin(), mpp::Strategy::Constant);
  }

  log_info("generating motion primitive automaton");
  const auto mpa = mpp::MotionPrimitiveAutomaton::generate(base.mpa_config());

  struct Row {
    std::string name;
    double total_cost = 0.0;
    double total_time = 0.0;
  };
  std::vector<Row> rows;
  for (const mpp::Strategy strategy : strategies) {
    mpp::ScenarioConfig config = base;
    config.strategy = strategy;
    Row row{mpp::strategy_name(strategy), 0.0, 0.0};
    for (const std::uint64_t s : config.seeds) {
      log_info(row.name + ", seed " + std::to_string(s));
      try {
        const auto result = mpp::run_experiment(config, s, mpa);
        row.total_cost += result.total_cost;
        row.total_time += result.total_time;
      } catch (const mpp::CollisionError& e) {
        return report_collision({e, s, row.name});
      }
    }
    rows.push_back(row);
  }

  const double baseline = rows.front().total_cost;
  nlohmann::ordered_json out;
  out["schema"] = 1;
  out["config"] = base.name;
  out["seeds"] = base.seeds;
  out["baseline"] = rows.front().name;
  out["strategies"] = nlohmann::ordered_json::array();

  std::cout << "strategy    total_cost  vs_constant  networked_time\n";
  for (const Row& row : rows) {
    const double normalized =
        baseline > 0.0 ? row.total_cost / baseline : 1.0;
    char line[128];
    std::snprintf(line, sizeof(line), "%-10s %11.4f %12.4f %15.6f",
                  row.name.c_str(), row.total_cost, normalized,
                  row.total_time);
    std::cout << line << '\n';
    out["strategies"].push_back({{"strategy", row.name},
                                 {"total_cost", row.total_cost},
                                 {"normalized_cost", normalized},
                                 {"networked_time", row.total_time}});
  }
  if (!json_path.empty()) {
    write_file(json_path, out.dump(2) + "\n");
    log_info("wrote " + json_path);
  }
  return 0;
}

int cmd_schedule(int classes, std::uint64_t seed, int enumerate_classes,
                 bool as_json) {
  if (enumerate_classes > 0) {
    const auto sets = mpp::unique_schedule_sets(enumerate_classes);
    std::cout << sets.size() << '\n';
    return 0;
  }
  if (classes <= 0) {
    return fail("config", "pass --classes N or --enumerate N");
  }
  const mpp::ScheduleMatrix matrix = mpp::build_schedule(classes, seed);
  if (as_json) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["classes"] = classes;
    j["seed"] = seed;
    j["rows"] = matrix.rows;
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  for (const auto& row : matrix.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::cout << (i ? " " : "") << row[i];
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_mapf(const std::string& map_path, std::string sidecar_path) {
  if (sidecar_path.empty()) {
    sidecar_path =
        std::filesystem::path(map_path).replace_extension(".json").string();
  }
  const mpp::GridInstance instance =
      mpp::load_instance(map_path, sidecar_path);
  log_info("classifying " + std::to_string(instance.n_agents()) +
           " agents, time limit " + std::to_string(instance.time_limit));
  const auto report = mpp::classify_solvability(instance);
  std::cout << mpp::report_to_json(instance, report).dump(2) << '\n';
  return 0;
}

int cmd_plot_data(const std::string& report_path, const std::string& out_dir) {
  const nlohmann::json report = read_json_file(report_path);
  if (!report.is_object() || report.value("schema", 0) != 1 ||
      !report.contains("steps") || !report["steps"].is_array()) {
    return fail("parse", "\"" + report_path +
                             "\" is not a schema-1 simulation report");
  }
  std::filesystem::create_directories(out_dir);
  std::ostringstream cost, time, classes;
  cost << "step,selected_cost\n";
  time << "step,networked_time\n";
  classes << "step,n_classes\n";
  for (const auto& step : report["steps"]) {
    const int k = step.at("step").get<int>();
    cost << k << ',' << step.at("selected_cost").dump() << '\n';
    time << k << ',' << step.at("networked_time").dump() << '\n';
    classes << k << ',' << step.at("n_classes").get<int>() << '\n';
  }
  const std::filesystem::path dir(out_dir);
  write_file(dir / "cost.csv", cost.str());
  write_file(dir / "time.csv", time.str());
  write_file(dir / "classes.csv", classes.str());
  std::cout << (dir / "cost.csv").string() << '\n'
            << (dir / "time.csv").string() << '\n'
            << (dir / "classes.csv").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prioritized receding-horizon motion planning toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;

  auto* simulate = app.add_subcommand(
      "simulate", "Run the configured strategy and write reports");
  simulate->add_option("config", config_path, "Scenario configuration JSON")
      ->required();
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_option("--seed", seed,
                       "Run only this seed instead of the configured list");

  std::string strategy_list;
  std::string compare_json;
  auto* compare = app.add_subcommand(
      "compare", "Run several strategies over shared seeds");
  compare->add_option("config", config_path, "Scenario configuration JSON")
      ->required();
  compare
      ->add_option("--strategies", strategy_list,
                   "Comma separated strategy names")
      ->required();
  compare->add_option("--seed", seed,
                      "Run only this seed instead of the configured list");
  compare->add_option("--json", compare_json,
                      "Also write the table as JSON to this path");

  int classes = 0;
  int enumerate_classes = 0;
  std::uint64_t schedule_seed = 0;
  bool schedule_json = false;
  auto* schedule = app.add_subcommand(
      "schedule", "Print or enumerate computation schedules");
  schedule->add_option("--classes", classes,
                       "Rows of the schedule for this class count");
  schedule->add_option("--seed", schedule_seed, "Time step seed");
  schedule->add_option("--enumerate", enumerate_classes,
                       "Print the number of unique schedules instead");
  schedule->add_flag("--json", schedule_json, "Emit the matrix as JSON");

  std::string map_path;
  std::string sidecar_path;
  auto* mapf = app.add_subcommand(
      "mapf", "Classify the solvability of a grid instance");
  mapf->add_option("instance", map_path, "Path to the .map file")->required();
  mapf->add_option("--sidecar", sidecar_path,
                   "Instance sidecar (defaults to <instance>.json)");

  std::string report_path;
  auto* plot = app.add_subcommand(
      "plot-data", "Export per-step CSV series from a simulation report");
  plot->add_option("report", report_path, "Report JSON from simulate")
      ->required();
  plot->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::ostringstream hint;
    hint << e.what();
    return fail("usage", hint.str(), {{"name", e.get_name()}},
                app.exit(e, std::cerr, std::cerr));
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, out_dir, seed);
    if (compare->parsed()) {
      return cmd_compare(config_path, strategy_list, seed, compare_json);
    }
    if (schedule->parsed()) {
      return cmd_schedule(classes, schedule_seed, enumerate_classes,
                          schedule_json);
    }
    if (mapf->parsed()) return cmd_mapf(map_path, sidecar_path);
    if (plot->parsed()) return cmd_plot_data(report_path, out_dir);
  } catch (const mpp::ConfigError& e) {
    return fail("config", e.what(), {{"violations", e.violations}});
  } catch (const mpp::CapacityError& e) {
    return fail("capacity", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail("parse", e.what());
  } catch (const std::invalid_argument& e) {
    return fail("invalid_argument", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
