#include "mpp/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mpp/rng.hpp"

namespace mpp {

double trajectory_cost(const std::vector<VehicleState>& trajectory,
                       const ReferenceTrajectory& reference) {
  if (trajectory.size() != reference.size())
    throw std::invalid_argument("trajectory and reference lengths differ");
  double cost = 0.0;
  for (std::size_t l = 0; l < trajectory.size(); ++l) {
    const double dx = trajectory[l].x - reference[l].x;
    const double dy = trajectory[l].y - reference[l].y;
    cost += dx * dx + dy * dy;
  }
  return cost;
}

namespace {

struct Node {
  int parent = -1;
  int primitive = -1;    // taken to reach this node
  int q = 0;             // automaton state
  VehicleState pose;
  double cost = 0.0;     // accumulated squared position error
  int depth = 0;
  std::vector<int> untried;  // admissible primitives not yet attempted
};

bool occupancy_clear(const ConvexPolygon& occupancy,
                     const std::vector<ConvexPolygon>& obstacles,
                     const std::vector<Aabb>& obstacle_boxes) {
  const Aabb box = bounding_box(occupancy);
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (!boxes_overlap(box, obstacle_boxes[i])) continue;
    if (polygons_intersect(occupancy, obstacles[i])) return false;
  }
  return true;
}

}  // namespace

PlanResult mcts_plan(const MotionPrimitiveAutomaton& mpa,
                     const PlanningProblem& problem, int budget,
                     std::uint64_t seed) {
  const int h = mpa.config().horizon;
  if (static_cast<int>(problem.reference.size()) != h)
    throw std::invalid_argument("reference must cover the horizon");
  if (static_cast<int>(problem.obstacles.size()) != h)
    throw std::invalid_argument("obstacles must cover the horizon");
  const AutomatonState& q0 = mpa.state(problem.initial_automaton_state);
  if (std::abs(q0.speed - problem.initial_state.speed) > 1e-9 ||
      std::abs(q0.steering - problem.initial_state.steering) > 1e-9)
    throw std::invalid_argument("initial state off the automaton level grid");

  std::vector<std::vector<Aabb>> obstacle_boxes(h);
  for (int l = 0; l < h; ++l)
    for (const ConvexPolygon& p : problem.obstacles[l])
      obstacle_boxes[l].push_back(bounding_box(p));

  PlanResult result;

  // A start pose already inside an obstacle cannot move anywhere; report
  // infeasible and let the caller fall back.
  const ConvexPolygon start_box = footprint(
      mpa.config().vehicle, problem.initial_state, mpa.config().occupancy_margin);
  if (!occupancy_clear(start_box, problem.obstacles[0], obstacle_boxes[0]))
    return result;

  std::vector<Node> nodes;
  nodes.push_back({-1, -1, problem.initial_automaton_state,
                   problem.initial_state, 0.0, 0,
                   mpa.admissible(problem.initial_automaton_state, 0)});
  std::vector<int> expandable;
  if (!nodes[0].untried.empty()) expandable.push_back(0);

  SplitMix64 rng(seed);
  int best = -1;

  while (result.expansions < budget && !expandable.empty()) {
    ++result.expansions;
    const auto slot = rng.below(expandable.size());
    const int ni = expandable[slot];
    auto& untried = nodes[ni].untried;
    const auto pick = rng.below(untried.size());
    const int prim_id = untried[pick];
    untried[pick] = untried.back();
    untried.pop_back();
    if (untried.empty()) {
      expandable[slot] = expandable.back();
      expandable.pop_back();
    }

    const Node& parent = nodes[ni];
    const MotionPrimitive& prim = mpa.primitive(prim_id);
    const ConvexPolygon swept =
        transform(prim.occupancy, {parent.pose.x, parent.pose.y},
                  parent.pose.heading);
    if (!occupancy_clear(swept, problem.obstacles[parent.depth],
                         obstacle_boxes[parent.depth]))
      continue;

    Node child;
    child.parent = ni;
    child.primitive = prim_id;
    child.q = prim.to;
    child.pose = chain_pose(parent.pose, prim.states.back());
    child.depth = parent.depth + 1;
    const VehicleState& ref = problem.reference[parent.depth];
    const double dx = child.pose.x - ref.x;
    const double dy = child.pose.y - ref.y;
    child.cost = parent.cost + dx * dx + dy * dy;

    const int ci = static_cast<int>(nodes.size());
    if (child.depth == h) {
      if (best == -1 || child.cost < nodes[best].cost) {
        nodes.push_back(std::move(child));
        best = ci;
      }
      continue;
    }
    child.untried = mpa.admissible(child.q, child.depth);
    nodes.push_back(std::move(child));
    if (!nodes[ci].untried.empty()) expandable.push_back(ci);
  }

  if (best == -1) return result;

  result.feasible = true;
  result.cost = nodes[best].cost;
  result.primitive_ids.assign(h, -1);
  result.states.assign(h + 1, {});
  int at = best;
  for (int l = h; l > 0; --l) {
    result.states[l] = nodes[at].pose;
    result.primitive_ids[l - 1] = nodes[at].primitive;
    at = nodes[at].parent;
  }
  result.states[0] = problem.initial_state;
  return result;
}

PlanResult fallback_plan(const MotionPrimitiveAutomaton& mpa,
                         const PlanResult& previous,
                         const ReferenceTrajectory& reference) {
  if (!previous.feasible)
    throw std::invalid_argument("fallback requires a previous feasible plan");
  const int h = mpa.config().horizon;
  if (static_cast<int>(previous.primitive_ids.size()) != h)
    throw std::invalid_argument("previous plan does not span the horizon");

  PlanResult out;
  out.feasible = true;
  out.used_fallback = true;
  out.primitive_ids.assign(previous.primitive_ids.begin() + 1,
                           previous.primitive_ids.end());
  out.states.assign(previous.states.begin() + 1, previous.states.end());

  const int q_end = mpa.primitive(previous.primitive_ids.back()).to;
  out.primitive_ids.push_back(mpa.standstill_primitive(q_end));
  out.states.push_back(out.states.back());  // stand still at the final pose

  out.cost = trajectory_cost(
      {out.states.begin() + 1, out.states.end()}, reference);
  return out;
}

ConvexPolygon plan_step_occupancy(const MotionPrimitiveAutomaton& mpa,
                                  const PlanResult& plan, int step) {
  const VehicleState& pose = plan.states.at(step);
  const MotionPrimitive& prim = mpa.primitive(plan.primitive_ids.at(step));
  return transform(prim.occupancy, {pose.x, pose.y}, pose.heading);
}

}  // namespace mpp
