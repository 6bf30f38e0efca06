#pragma once

#include <vector>

#include <json.hpp>

#include "mpp/geometry.hpp"
#include "mpp/vehicle.hpp"

namespace mpp {

struct MpaConfig {
  std::vector<double> speed_levels;     // ascending, first must be 0
  std::vector<double> steering_levels;  // ascending
  double step_duration = 0.2;           // duration of one primitive [s]
  int horizon = 6;                      // planning steps per solve
  double max_accel = 2.0;               // bounds admissible level changes
  double max_steer_rate = 0.75;
  int trajectory_samples = 10;          // integration samples per primitive
  int occupancy_poses = 5;              // footprints hulled into occupancy
  double occupancy_margin = 0.01;       // inflation on the swept footprint [m]
  VehicleParams vehicle;

  /// Lab-scale default set used by the simulation scenarios.
  static MpaConfig small_vehicle();
};

/// One vertex of the automaton: a (speed, steering) level pair the vehicle
/// rests in between primitives.
struct AutomatonState {
  double speed = 0.0;
  double steering = 0.0;
};

/// Edge of the automaton. The trajectory lives in the frame of the start
/// pose (origin, heading 0) and is chained rigidly onto the running pose,
/// so repeated application is drift-free.
struct MotionPrimitive {
  int from = 0;
  int to = 0;
  ControlInput input;                // constant over step_duration
  std::vector<VehicleState> states;  // trajectory_samples + 1 entries
  ConvexPolygon occupancy;           // hull of inflated footprints, local
};

/// Applies a primitive-local end state to a world pose.
VehicleState chain_pose(const VehicleState& base, const VehicleState& local);

class MotionPrimitiveAutomaton {
 public:
  /// Builds states, primitives, braking distances and reachable sets.
  /// Configurations in which some state cannot reach standstill within the
  /// horizon, or standstill cannot reach every state, are rejected with
  /// std::invalid_argument.
  static MotionPrimitiveAutomaton generate(const MpaConfig& config);

  const MpaConfig& config() const { return config_; }
  int n_states() const { return static_cast<int>(states_.size()); }
  const AutomatonState& state(int q) const { return states_.at(q); }
  int state_index(double speed, double steering) const;

  const std::vector<MotionPrimitive>& primitives() const { return primitives_; }
  const MotionPrimitive& primitive(int id) const { return primitives_.at(id); }

  /// Primitive ids usable from q when the step occupies horizon position
  /// l (0-based). Near the end of the horizon only transitions that still
  /// allow braking to speed 0 remain, so every admissible H-step path ends
  /// in a final state.
  const std::vector<int>& admissible(int q, int position) const;

  /// Transitions needed to reach some speed-0 state, ignoring the horizon.
  int steps_to_stop(int q) const { return steps_to_stop_.at(q); }
  bool is_final(int q) const { return states_.at(q).speed == 0.0; }

  /// Stand-still self loop of a speed-0 state.
  int standstill_primitive(int q) const;

  /// Convex over-approximation, per horizon step, of the area the body can
  /// occupy during that step starting from q. Local frame of the start
  /// pose; conservative against every admissible primitive chain.
  const std::vector<ConvexPolygon>& reachable(int q) const {
    return reachable_.at(q);
  }

  nlohmann::json to_json() const;
  /// Rebuilds all derived tables from the serialized states/primitives.
  static MotionPrimitiveAutomaton from_json(const nlohmann::json& j);

 private:
  MotionPrimitiveAutomaton() = default;
  void build_derived();  // steps_to_stop, admissible, reachable

  MpaConfig config_;
  std::vector<AutomatonState> states_;
  std::vector<MotionPrimitive> primitives_;
  std::vector<std::vector<int>> outgoing_;            // [q] -> primitive ids
  std::vector<int> steps_to_stop_;
  std::vector<std::vector<std::vector<int>>> admissible_;  // [q][position]
  std::vector<std::vector<ConvexPolygon>> reachable_;      // [q][step]
};

}  // namespace mpp
