#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mpp {

/// Four-connected grid world. Cells are addressed row-major; only free
/// cells are part of the environment graph, walls are impassable.
class GridMap {
 public:
  GridMap() = default;
  GridMap(int height, int width, std::vector<std::uint8_t> free);

  int height() const { return height_; }
  int width() const { return width_; }
  int n_cells() const { return height_ * width_; }
  int cell(int row, int col) const { return row * width_ + col; }
  int row_of(int cell) const { return cell / width_; }
  int col_of(int cell) const { return cell % width_; }
  bool in_bounds(int row, int col) const;
  bool free_at(int cell) const { return free_[static_cast<size_t>(cell)] != 0; }
  int n_free() const;

  /// Neighbour cells reachable in one move, fixed order: stay, north,
  /// east, south, west. Blocked and out-of-bounds moves are skipped.
  std::vector<int> moves_from(int cell) const;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> free_;
};

/// Parses a plain-text map: '.' free, '#' wall, one row per line. All rows
/// must have equal length; other characters -> std::invalid_argument.
GridMap parse_grid(const std::string& text);

/// One multi-agent instance: distinct start and target cells per agent and
/// a hard time limit K (plans span exactly K+1 positions).
struct GridInstance {
  GridMap map;
  std::vector<int> starts;
  std::vector<int> targets;
  int time_limit = 0;

  int n_agents() const { return static_cast<int>(starts.size()); }
};

/// Builds an instance from a map text and a sidecar document:
///   {"schema": 1, "starts": [[r,c],...], "targets": [[r,c],...],
///    "time_limit": K}
/// Violations (blocked cells, duplicate starts or targets, bad bounds)
/// -> std::invalid_argument.
GridInstance parse_instance(const std::string& map_text,
                            const nlohmann::json& sidecar);
GridInstance load_instance(const std::string& map_path,
                           const std::string& sidecar_path);

/// plans[i][k] is agent i's cell at time k; all plans share one length.
using MapfPlan = std::vector<std::vector<int>>;

/// A vertex conflict places two agents on one cell at time step; an edge
/// conflict swaps them across (v,u) between step and step+1.
struct GridConflict {
  int first = 0;
  int second = 0;
  int v = 0;
  int u = 0;  // equal to v for vertex conflicts
  int step = 0;
  bool edge = false;

  bool operator==(const GridConflict&) const = default;
};

/// All conflicts in deterministic order (by time, vertex before edge,
/// then by agent pair). Plans of unequal length -> std::invalid_argument.
std::vector<GridConflict> detect_conflicts(const MapfPlan& plans);

/// Sequential prioritized planning with a fixed solve order: agents plan a
/// space-time shortest path (waits allowed, cost = steps away from target)
/// treating every earlier agent's full plan as a moving obstacle, including
/// its rest on the target. Returns nullopt as soon as one agent has no
/// conflict-free path within the time limit.
std::optional<MapfPlan> pp_solve_grid(const GridInstance& instance,
                                      const std::vector<int>& order);

/// Per-step solve orders for receding-horizon prioritized planning.
struct TpSchedule {
  std::vector<std::vector<int>> orderings;
};

/// Look-ahead of the time-variant executor: plans cover this many moves,
/// the remainder is scored by Manhattan distance, and only the first move
/// is executed before the next step replans.
inline constexpr int kTpWindow = 2;

/// Receding-horizon variant: at each step agents replan over the window in
/// that step's order, only the first move is executed. Succeeds once every
/// agent rests on its target; the returned plans are padded to the time
/// limit. Passing window = instance.time_limit makes each solve span the
/// whole remaining horizon.
std::optional<MapfPlan> tp_solve_grid(const GridInstance& instance,
                                      const TpSchedule& schedule,
                                      int window = kTpWindow);

enum class SolvabilityClass { PSolvable, TpSolvableOnly, PpUnsolvable };

std::string solvability_name(SolvabilityClass c);

/// Certificate produced by classify_solvability: a witness order (fixed
/// prioritization case) or a witness schedule (time-variant case) plus the
/// conflict-free plan it generates.
struct SolvabilityReport {
  SolvabilityClass kind = SolvabilityClass::PpUnsolvable;
  std::vector<int> order;
  TpSchedule schedule;
  MapfPlan plan;
};

/// Exhaustive classification: tries every fixed solve order, then searches
/// the per-step ordering space with a depth-first walk that keeps the
/// previous step's order when possible (certificates stay constant until a
/// flip is forced). Guards: n_agents <= 4 and time_limit <= 12, otherwise
/// CapacityError.
SolvabilityReport classify_solvability(const GridInstance& instance);

nlohmann::ordered_json report_to_json(const GridInstance& instance,
                                      const SolvabilityReport& report);

}  // namespace mpp
