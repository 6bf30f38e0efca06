#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mpp/geometry.hpp"
#include "mpp/mpa.hpp"
#include "mpp/vehicle.hpp"

namespace mpp {

/// Desired states for the next H steps (entries for k+1 .. k+H).
using ReferenceTrajectory = std::vector<VehicleState>;

struct PlanningProblem {
  VehicleState initial_state;       // world pose on the automaton level grid
  int initial_automaton_state = 0;
  ReferenceTrajectory reference;    // H entries
  /// obstacles[l]: keep-out polygons during step l (world frame). Includes
  /// road boundary walls and the trajectories received from agents that
  /// plan earlier.
  std::vector<std::vector<ConvexPolygon>> obstacles;
};

struct PlanResult {
  bool feasible = false;
  std::vector<int> primitive_ids;    // H entries
  std::vector<VehicleState> states;  // H+1 entries, world frame, [0] = start
  double cost = std::numeric_limits<double>::infinity();
  int expansions = 0;     // expansion attempts consumed
  bool used_fallback = false;
};

/// Sum of squared position errors against the reference; heading, speed and
/// steering do not enter. trajectory holds the H states after the initial
/// one. Length mismatch -> std::invalid_argument.
double trajectory_cost(const std::vector<VehicleState>& trajectory,
                       const ReferenceTrajectory& reference);

/// Tree search over admissible primitive chains: repeatedly picks a random
/// expandable node and one untried primitive, keeps the child when its
/// swept occupancy clears the step's obstacles, and finally returns the
/// cheapest horizon-length path (which ends at standstill by construction).
/// Expansion order depends only on the seed, never on the budget, so a
/// larger budget explores a superset (anytime property). budget counts
/// expansion attempts; the search stops early once the tree is exhausted,
/// which makes a generous budget equivalent to exhaustive enumeration.
PlanResult mcts_plan(const MotionPrimitiveAutomaton& mpa,
                     const PlanningProblem& problem, int budget,
                     std::uint64_t seed);

/// Recovery when no feasible plan is found: drop the executed first step of
/// the previous plan and append one stand-still step at its final pose.
/// Stays feasible against unchanged earlier-planned trajectories; the cost
/// is re-evaluated against the current reference.
PlanResult fallback_plan(const MotionPrimitiveAutomaton& mpa,
                         const PlanResult& previous,
                         const ReferenceTrajectory& reference);

/// World-frame area swept by the plan during one step.
ConvexPolygon plan_step_occupancy(const MotionPrimitiveAutomaton& mpa,
                                  const PlanResult& plan, int step);

}  // namespace mpp
