#include "mpp/mapf.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "mpp/error.hpp"

namespace mpp {
namespace {

constexpr int kMaxAgents = 4;
constexpr int kMaxTimeLimit = 12;
constexpr int kUnreached = std::numeric_limits<int>::max();

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open \"" + path + "\"");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int checked_cell(const GridMap& map, const nlohmann::json& rc,
                 const std::string& what, int agent) {
  const std::string where = what + " of agent " + std::to_string(agent + 1);
  if (!rc.is_array() || rc.size() != 2 || !rc[0].is_number_integer() ||
      !rc[1].is_number_integer()) {
    throw std::invalid_argument(where + " must be a [row, col] pair");
  }
  const int row = rc[0].get<int>();
  const int col = rc[1].get<int>();
  if (!map.in_bounds(row, col)) {
    throw std::invalid_argument(where + " is outside the map");
  }
  const int cell = map.cell(row, col);
  if (!map.free_at(cell)) {
    throw std::invalid_argument(where + " is a wall cell");
  }
  return cell;
}

}  // namespace

GridMap::GridMap(int height, int width, std::vector<std::uint8_t> free)
    : height_(height), width_(width), free_(std::move(free)) {
  if (height_ <= 0 || width_ <= 0 ||
      free_.size() != static_cast<size_t>(height_ * width_)) {
    throw std::invalid_argument("grid dimensions do not match cell data");
  }
}

bool GridMap::in_bounds(int row, int col) const {
  return row >= 0 && row < height_ && col >= 0 && col < width_;
}

int GridMap::n_free() const {
  return static_cast<int>(std::count(free_.begin(), free_.end(), 1));
}

std::vector<int> GridMap::moves_from(int cell) const {
  const int row = row_of(cell);
  const int col = col_of(cell);
  // Stay first, then N, E, S, W; the order is part of the determinism
  // contract for planner tie-breaking.
  static constexpr int kSteps[5][2] = {
      {0, 0}, {-1, 0}, {0, 1}, {1, 0}, {0, -1}};
  std::vector<int> out;
  out.reserve(5);
  for (const auto& step : kSteps) {
    const int r = row + step[0];
    const int c = col + step[1];
    if (!in_bounds(r, c)) continue;
    const int next = this->cell(r, c);
    if (free_at(next)) out.push_back(next);
  }
  return out;
}

GridMap parse_grid(const std::string& text) {
  std::vector<std::string> rows;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(line);
  }
  if (rows.empty()) throw std::invalid_argument("map text has no rows");
  const size_t width = rows.front().size();
  std::vector<std::uint8_t> free;
  free.reserve(rows.size() * width);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw std::invalid_argument("map rows must all have the same width");
    }
    for (char ch : rows[r]) {
      if (ch == '.') {
        free.push_back(1);
      } else if (ch == '#') {
        free.push_back(0);
      } else {
        throw std::invalid_argument(std::string("unexpected map character '") +
                                    ch + "'");
      }
    }
  }
  return GridMap(static_cast<int>(rows.size()), static_cast<int>(width),
                 std::move(free));
}

GridInstance parse_instance(const std::string& map_text,
                            const nlohmann::json& sidecar) {
  if (!sidecar.is_object()) {
    throw std::invalid_argument("instance sidecar must be a JSON object");
  }
  if (!sidecar.contains("schema") || sidecar["schema"] != 1) {
    throw std::invalid_argument("instance sidecar requires \"schema\": 1");
  }
  GridInstance instance;
  instance.map = parse_grid(map_text);
  if (!sidecar.contains("starts") || !sidecar.contains("targets") ||
      !sidecar.contains("time_limit")) {
    throw std::invalid_argument(
        "instance sidecar requires \"starts\", \"targets\" and "
        "\"time_limit\"");
  }
  const auto& starts = sidecar["starts"];
  const auto& targets = sidecar["targets"];
  if (!starts.is_array() || !targets.is_array() || starts.empty() ||
      starts.size() != targets.size()) {
    throw std::invalid_argument(
        "\"starts\" and \"targets\" must be nonempty arrays of equal size");
  }
  for (size_t i = 0; i < starts.size(); ++i) {
    const int agent = static_cast<int>(i);
    instance.starts.push_back(
        checked_cell(instance.map, starts[i], "start", agent));
    instance.targets.push_back(
        checked_cell(instance.map, targets[i], "target", agent));
  }
  for (size_t i = 0; i < instance.starts.size(); ++i) {
    for (size_t j = i + 1; j < instance.starts.size(); ++j) {
      if (instance.starts[i] == instance.starts[j]) {
        throw std::invalid_argument("starts must be pairwise distinct");
      }
      if (instance.targets[i] == instance.targets[j]) {
        throw std::invalid_argument("targets must be pairwise distinct");
      }
    }
  }
  if (!sidecar["time_limit"].is_number_integer() ||
      sidecar["time_limit"].get<int>() < 1) {
    throw std::invalid_argument("\"time_limit\" must be a positive integer");
  }
  instance.time_limit = sidecar["time_limit"].get<int>();
  return instance;
}

GridInstance load_instance(const std::string& map_path,
                           const std::string& sidecar_path) {
  const std::string map_text = read_file(map_path);
  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(read_file(sidecar_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("sidecar \"" + sidecar_path +
                                "\": " + e.what());
  }
  return parse_instance(map_text, sidecar);
}

std::vector<GridConflict> detect_conflicts(const MapfPlan& plans) {
  const int n = static_cast<int>(plans.size());
  for (const auto& plan : plans) {
    if (plan.size() != plans.front().size()) {
      throw std::invalid_argument("plans must all have the same length");
    }
  }
  std::vector<GridConflict> out;
  if (n == 0 || plans.front().empty()) return out;
  const int last = static_cast<int>(plans.front().size()) - 1;
  for (int k = 0; k <= last; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (plans[i][k] == plans[j][k]) {
          out.push_back({i + 1, j + 1, plans[i][k], plans[i][k], k, false});
        }
      }
    }
    if (k == last) break;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (plans[i][k] == plans[j][k + 1] && plans[i][k + 1] == plans[j][k] &&
            plans[i][k] != plans[j][k]) {
          out.push_back({i + 1, j + 1, plans[i][k], plans[i][k + 1], k, true});
        }
      }
    }
  }
  return out;
}

namespace {

/// Space-time shortest path over times t0..horizon_end (index 0 = time
/// t0); preds use the same relative indexing. Cost counts steps spent away
/// from the target, so agents rest on their targets whenever they can.
/// With hard_target the path must end on the target; otherwise the end
/// cell minimizing cost + Manhattan distance to the target is chosen,
/// which is the windowed greedy used by the time-variant executor.
std::optional<std::vector<int>> plan_one(
    const GridMap& map, int start, int target, int t0, int horizon_end,
    bool hard_target, const std::vector<const std::vector<int>*>& preds) {
  const int span = horizon_end - t0;  // moves still available
  if (span < 0) return std::nullopt;
  const int n_cells = map.n_cells();
  std::vector<int> cost(static_cast<size_t>(span + 1) * n_cells, kUnreached);
  std::vector<int> parent(static_cast<size_t>(span + 1) * n_cells, -1);
  auto at = [n_cells](int rel, int cell) { return rel * n_cells + cell; };

  for (const auto* pred : preds) {
    if ((*pred)[0] == start) return std::nullopt;  // stacked start, no plan
  }
  cost[at(0, start)] = 0;
  for (int rel = 0; rel < span; ++rel) {
    for (int cell = 0; cell < n_cells; ++cell) {
      const int g = cost[at(rel, cell)];
      if (g == kUnreached) continue;
      for (int next : map.moves_from(cell)) {
        bool blocked = false;
        for (const auto* pred : preds) {
          const int pred_now = (*pred)[rel];
          const int pred_next = (*pred)[rel + 1];
          if (pred_next == next || (pred_now == next && pred_next == cell)) {
            blocked = true;
            break;
          }
        }
        if (blocked) continue;
        const int g_next = g + (next == target ? 0 : 1);
        if (g_next < cost[at(rel + 1, next)]) {
          cost[at(rel + 1, next)] = g_next;
          parent[at(rel + 1, next)] = cell;
        }
      }
    }
  }
  int end_cell = target;
  if (!hard_target) {
    const int target_row = map.row_of(target);
    const int target_col = map.col_of(target);
    int best = kUnreached;
    for (int cell = 0; cell < n_cells; ++cell) {
      if (cost[at(span, cell)] == kUnreached) continue;
      const int remaining = std::abs(map.row_of(cell) - target_row) +
                            std::abs(map.col_of(cell) - target_col);
      const int score = cost[at(span, cell)] + remaining;
      if (score < best) {
        best = score;
        end_cell = cell;
      }
    }
    if (best == kUnreached) return std::nullopt;
  } else if (cost[at(span, target)] == kUnreached) {
    return std::nullopt;
  }
  std::vector<int> path(span + 1, end_cell);
  for (int rel = span; rel > 0; --rel) {
    path[rel - 1] = parent[at(rel, path[rel])];
  }
  path[0] = start;
  return path;
}

std::vector<int> checked_order(const std::vector<int>& order, int n_agents) {
  if (static_cast<int>(order.size()) != n_agents) {
    throw std::invalid_argument("solve order must cover every agent");
  }
  std::vector<bool> seen(n_agents, false);
  for (int agent : order) {
    if (agent < 0 || agent >= n_agents || seen[agent]) {
      throw std::invalid_argument("solve order must be a permutation");
    }
    seen[agent] = true;
  }
  return order;
}

}  // namespace

std::optional<MapfPlan> pp_solve_grid(const GridInstance& instance,
                                      const std::vector<int>& order) {
  checked_order(order, instance.n_agents());
  MapfPlan plans(instance.n_agents());
  std::vector<const std::vector<int>*> preds;
  for (int agent : order) {
    auto path = plan_one(instance.map, instance.starts[agent],
                         instance.targets[agent], 0, instance.time_limit,
                         /*hard_target=*/true, preds);
    if (!path) return std::nullopt;
    plans[agent] = std::move(*path);
    preds.push_back(&plans[agent]);
  }
  return plans;
}

namespace {

/// One receding-horizon step: every agent replans over the window in the
/// given order, then the first move of each plan is taken.
std::optional<std::vector<int>> advance_once(const GridInstance& instance,
                                             const std::vector<int>& current,
                                             int step, int window,
                                             const std::vector<int>& order) {
  const int horizon_end = std::min(step + window, instance.time_limit);
  if (horizon_end <= step) return std::nullopt;
  std::vector<std::vector<int>> fresh(instance.n_agents());
  std::vector<const std::vector<int>*> preds;
  for (int agent : order) {
    auto path =
        plan_one(instance.map, current[agent], instance.targets[agent], step,
                 horizon_end, /*hard_target=*/false, preds);
    if (!path) return std::nullopt;
    fresh[agent] = std::move(*path);
    preds.push_back(&fresh[agent]);
  }
  std::vector<int> next(instance.n_agents());
  for (int i = 0; i < instance.n_agents(); ++i) next[i] = fresh[i][1];
  return next;
}

}  // namespace

std::optional<MapfPlan> tp_solve_grid(const GridInstance& instance,
                                      const TpSchedule& schedule,
                                      int window) {
  if (window < 1) throw std::invalid_argument("window must be positive");
  const int n = instance.n_agents();
  std::vector<int> current = instance.starts;
  MapfPlan executed(n);
  for (int i = 0; i < n; ++i) executed[i].push_back(current[i]);
  for (int step = 0; step < instance.time_limit; ++step) {
    if (current == instance.targets) break;
    if (step >= static_cast<int>(schedule.orderings.size())) return std::nullopt;
    auto next = advance_once(instance, current, step, window,
                             checked_order(schedule.orderings[step], n));
    if (!next) return std::nullopt;
    current = std::move(*next);
    for (int i = 0; i < n; ++i) executed[i].push_back(current[i]);
  }
  if (current != instance.targets) return std::nullopt;
  for (int i = 0; i < n; ++i) {
    executed[i].resize(instance.time_limit + 1, instance.targets[i]);
  }
  return executed;
}

std::string solvability_name(SolvabilityClass c) {
  switch (c) {
    case SolvabilityClass::PSolvable:
      return "P_SOLVABLE";
    case SolvabilityClass::TpSolvableOnly:
      return "TP_SOLVABLE_ONLY";
    case SolvabilityClass::PpUnsolvable:
      return "PP_UNSOLVABLE";
  }
  return "UNKNOWN";
}

namespace {

std::uint64_t pack_state(const std::vector<int>& cells, int step) {
  std::uint64_t key = static_cast<std::uint64_t>(step);
  int shift = 8;
  for (int cell : cells) {
    key |= static_cast<std::uint64_t>(cell + 1) << shift;
    shift += 12;
  }
  return key;
}

struct TpSearch {
  const GridInstance& instance;
  const std::vector<std::vector<int>>& perms;
  std::unordered_set<std::uint64_t> visited;
  std::vector<std::vector<int>> schedule;

  bool run(const std::vector<int>& current, int step, size_t prev) {
    if (current == instance.targets) return true;
    if (step >= instance.time_limit) return false;
    if (!visited.insert(pack_state(current, step)).second) return false;
    for (size_t round = 0; round < perms.size(); ++round) {
      // Keep the previous step's order first so certificates only flip
      // when the instance forces it.
      const size_t index = round == 0 ? prev
                           : (round <= prev ? round - 1 : round);
      auto next = advance_once(instance, current, step, kTpWindow,
                               perms[index]);
      if (!next) continue;
      schedule.push_back(perms[index]);
      if (run(*next, step + 1, index)) return true;
      schedule.pop_back();
    }
    return false;
  }
};

}  // namespace

SolvabilityReport classify_solvability(const GridInstance& instance) {
  const int n = instance.n_agents();
  if (n > kMaxAgents) {
    throw CapacityError("classification is limited to " +
                        std::to_string(kMaxAgents) + " agents, got " +
                        std::to_string(n));
  }
  if (instance.time_limit > kMaxTimeLimit) {
    throw CapacityError("classification is limited to time limit " +
                        std::to_string(kMaxTimeLimit) + ", got " +
                        std::to_string(instance.time_limit));
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));

  for (const auto& candidate : perms) {
    if (auto plan = pp_solve_grid(instance, candidate)) {
      return {SolvabilityClass::PSolvable, candidate, {}, std::move(*plan)};
    }
  }

  TpSearch search{instance, perms, {}, {}};
  if (search.run(instance.starts, 0, 0)) {
    TpSchedule schedule{std::move(search.schedule)};
    auto plan = tp_solve_grid(instance, schedule, kTpWindow);
    if (!plan) {
      throw std::logic_error("schedule replay diverged from the search");
    }
    return {SolvabilityClass::TpSolvableOnly, {}, std::move(schedule),
            std::move(*plan)};
  }
  return {SolvabilityClass::PpUnsolvable, {}, {}, {}};
}

nlohmann::ordered_json report_to_json(const GridInstance& instance,
                                      const SolvabilityReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["class"] = solvability_name(report.kind);
  j["n_agents"] = instance.n_agents();
  j["time_limit"] = instance.time_limit;
  auto cell_json = [&instance](int cell) {
    return nlohmann::json::array(
        {instance.map.row_of(cell), instance.map.col_of(cell)});
  };
  if (report.kind == SolvabilityClass::PSolvable) {
    nlohmann::json order = nlohmann::json::array();
    for (int agent : report.order) order.push_back(agent + 1);
    j["order"] = std::move(order);
  }
  if (report.kind == SolvabilityClass::TpSolvableOnly) {
    nlohmann::json orderings = nlohmann::json::array();
    for (const auto& step_order : report.schedule.orderings) {
      nlohmann::json one = nlohmann::json::array();
      for (int agent : step_order) one.push_back(agent + 1);
      orderings.push_back(std::move(one));
    }
    j["schedule"] = std::move(orderings);
  }
  if (!report.plan.empty()) {
    nlohmann::json plans = nlohmann::json::array();
    for (const auto& path : report.plan) {
      nlohmann::json one = nlohmann::json::array();
      for (int cell : path) one.push_back(cell_json(cell));
      plans.push_back(std::move(one));
    }
    j["plan"] = std::move(plans);
  }
  return j;
}

}  // namespace mpp
