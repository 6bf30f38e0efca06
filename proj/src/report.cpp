#include <sstream>

#include "mpp/sim.hpp"

namespace mpp {

namespace {

nlohmann::ordered_json state_json(const VehicleState& s) {
  return {{"x", s.x},
          {"y", s.y},
          {"heading", s.heading},
          {"speed", s.speed},
          {"steering", s.steering}};
}

/// Shortest round-trip decimal form, identical on every run.
std::string number_repr(double v) { return nlohmann::json(v).dump(); }

}  // namespace

nlohmann::ordered_json experiment_report(const ExperimentResult& res) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["config"] = config_to_json(res.config);
  j["seed"] = res.seed;

  long long expansions = 0;
  int fallbacks = 0;
  int messages = 0;
  std::size_t message_bytes = 0;
  for (const StepRecord& s : res.steps) {
    expansions += s.expansions;
    fallbacks += s.fallbacks;
    messages += s.messages;
    message_bytes += s.message_bytes;
  }
  j["summary"] = {{"steps", res.steps.size()},
                  {"total_cost", res.total_cost},
                  {"total_time", res.total_time},
                  {"mean_classes", res.mean_classes},
                  {"expansions", expansions},
                  {"fallbacks", fallbacks},
                  {"messages", messages},
                  {"message_bytes", message_bytes}};

  j["steps"] = nlohmann::ordered_json::array();
  for (const StepRecord& s : res.steps) {
    nlohmann::ordered_json e;
    e["step"] = s.step;
    e["coupling"] = nlohmann::ordered_json::array();
    for (const auto& [a, b] : s.coupling_edges) e["coupling"].push_back({a, b});
    e["n_classes"] = s.n_classes;
    e["n_rows"] = s.n_rows;
    e["orientations"] = s.orientations;
    e["selected_row"] = s.selected_row;
    e["row_costs"] = s.row_costs;
    e["selected_cost"] = s.selected_cost;
    e["networked_time"] = s.networked_time;
    e["expansions"] = s.expansions;
    e["fallbacks"] = s.fallbacks;
    e["messages"] = s.messages;
    e["message_bytes"] = s.message_bytes;
    e["collision_free"] = s.collision_free;
    j["steps"].push_back(std::move(e));
  }

  j["trajectories"] = nlohmann::ordered_json::array();
  for (const auto& t : res.trajectories) {
    nlohmann::ordered_json v = nlohmann::ordered_json::array();
    for (const VehicleState& s : t) v.push_back(state_json(s));
    j["trajectories"].push_back(std::move(v));
  }
  return j;
}

std::string report_csv(const ExperimentResult& res) {
  std::ostringstream out;
  out << "step,edges,classes,rows,orientations,selected_row,selected_cost,"
         "networked_time,expansions,fallbacks,messages,message_bytes\n";
  for (const StepRecord& s : res.steps) {
    out << s.step << ',' << s.coupling_edges.size() << ',' << s.n_classes
        << ',' << s.n_rows << ',' << s.orientations << ',' << s.selected_row
        << ',' << number_repr(s.selected_cost) << ','
        << number_repr(s.networked_time) << ',' << s.expansions << ','
        << s.fallbacks << ',' << s.messages << ',' << s.message_bytes << '\n';
  }
  return out.str();
}

std::string plan_traces_jsonl(const ExperimentResult& res) {
  std::ostringstream out;
  for (const StepRecord& s : res.steps) {
    for (std::size_t i = 0; i < s.executed_plans.size(); ++i) {
      const PlanResult& p = s.executed_plans[i];
      nlohmann::ordered_json line;
      line["agent"] = i + 1;
      line["step"] = s.step;
      line["primitives"] = p.primitive_ids;
      line["cost"] = p.cost;
      line["feasible"] = p.feasible;
      line["fallback"] = p.used_fallback;
      out << line.dump() << '\n';
    }
  }
  return out.str();
}

}  // namespace mpp
