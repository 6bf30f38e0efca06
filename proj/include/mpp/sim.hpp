#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpp/graph.hpp"
#include "mpp/mpa.hpp"
#include "mpp/planner.hpp"
#include "mpp/prioritization.hpp"
#include "mpp/road.hpp"
#include "mpp/scenario.hpp"
#include "mpp/schedule.hpp"

namespace mpp {

struct SimVehicle {
  int path = 0;
  double arc = 0.0;  // tracked arc-length progress along the path
  double reference_speed = 0.8;
  VehicleState state;        // rests on the automaton level grid
  int automaton_state = 0;
  PlanResult last_plan;      // plan executed at the previous step (fallback source)
};

/// Mutable scenario state between receding-horizon steps. Everything a
/// strategy evaluation may read lives here; evaluations never write.
struct World {
  ScenarioConfig config;
  MotionPrimitiveAutomaton mpa;
  std::vector<LanePath> paths;
  std::vector<std::vector<ConvexPolygon>> walls;  // [path], empty when lane keeping is off
  std::vector<SimVehicle> vehicles;
  Prioritization retained;  // carried by the parallel strategy across steps
  int step = 0;             // next time step index k
};

/// Generates the automaton, builds paths and walls, and places the
/// vehicles at standstill on their start poses with a standstill plan as
/// the initial fallback source. Start poses that already collide pairwise
/// or with the own lane fence -> std::invalid_argument.
World build_world(const ScenarioConfig& config);
/// Same, but reuses an automaton generated for this configuration.
World build_world(const ScenarioConfig& config,
                  MotionPrimitiveAutomaton mpa);

/// Edge {i,j} iff the per-step reachable sets of the two vehicles overlap
/// during at least one step of the horizon.
UndirectedCouplingGraph coupling_graph(const World& world);

/// One trajectory handed from an earlier-planning agent to a later one.
struct MessageRecord {
  int row = 0;
  int slot = 0;      // slot of the receiving agent
  AgentId from = 0;
  AgentId to = 0;
  std::size_t bytes = 0;  // serialized size of the transferred occupancies
};

/// Result of planning all agents once, along one computation sequence.
struct RowOutcome {
  ComputationSequence sequence;      // classes in slot order
  std::vector<PlanResult> plans;     // [agent-1]
  std::vector<double> solve_times;   // [agent-1], seconds
  std::vector<MessageRecord> messages;
  double cost = 0.0;                 // summed plan costs
};

/// Full evaluation of one strategy at one step, with no side effects on
/// the world. Single-sequence strategies hold exactly one row; the
/// parallel strategy one row per executed schedule row; the enumerating
/// strategy one row per acyclic orientation.
struct StepOutcome {
  int step = 0;
  Strategy strategy = Strategy::Constant;
  UndirectedCouplingGraph coupling;
  int n_classes = 0;        // agent classes of the executed structure
  ScheduleMatrix schedule;  // executed rows (parallel strategy only)
  std::vector<RowOutcome> rows;
  int selected_row = 0;     // argmin cost, ties to the lowest index
  double networked_time = 0.0;  // seconds
  int orientations = 1;     // orientations evaluated (enumerating strategy)
};

StepOutcome evaluate_step(const World& world, Strategy strategy,
                          std::uint64_t seed);

/// Two executed swept footprints overlapped. Raised by the post-step audit.
class CollisionError : public std::runtime_error {
 public:
  CollisionError(int step, AgentId first, AgentId second, int sample);

  int step;
  AgentId first;
  AgentId second;
  int sample;  // trajectory sample index inside the executed primitive
};

/// Executes the selected row: audits the executed primitives pairwise at
/// every trajectory sample (uninflated footprints, touching counts as a
/// collision, CollisionError on overlap), then advances states, arcs,
/// fallback plans, the retained prioritization and the step counter.
void apply_step(World& world, const StepOutcome& outcome);

struct StepRecord {
  int step = 0;
  std::vector<std::pair<AgentId, AgentId>> coupling_edges;
  int n_classes = 0;
  int n_rows = 1;
  int orientations = 1;
  int selected_row = 0;
  double selected_cost = 0.0;
  std::vector<double> row_costs;
  double networked_time = 0.0;
  int expansions = 0;       // selected row, all agents
  int fallbacks = 0;        // agents that fell back in the selected row
  int messages = 0;         // all executed rows
  std::size_t message_bytes = 0;
  bool collision_free = true;
  std::vector<PlanResult> executed_plans;  // [agent-1], selected row
};

StepRecord record_outcome(const StepOutcome& outcome);

struct ExperimentResult {
  ScenarioConfig config;
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  /// [vehicle][k]: executed state at the start of step k; n_steps+1 entries.
  std::vector<std::vector<VehicleState>> trajectories;
  double total_cost = 0.0;
  double total_time = 0.0;
  double mean_classes = 0.0;
};

/// Runs the configured strategy over the whole duration for one seed.
/// CollisionError propagates with the world already advanced to the
/// offending step.
ExperimentResult run_experiment(const ScenarioConfig& config,
                                std::uint64_t seed);
ExperimentResult run_experiment(const ScenarioConfig& config,
                                std::uint64_t seed,
                                MotionPrimitiveAutomaton mpa);

/// Deterministic report: config echo, per-step records and totals. Equal
/// configs and seeds serialize to identical bytes.
nlohmann::ordered_json experiment_report(const ExperimentResult& result);

/// Header line plus one row per time step.
std::string report_csv(const ExperimentResult& result);

/// One JSON object per line: agent, step, primitive ids, cost, feasibility.
std::string plan_traces_jsonl(const ExperimentResult& result);

}  // namespace mpp
