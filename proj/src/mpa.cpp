#include "mpp/mpa.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace mpp {

MpaConfig MpaConfig::small_vehicle() {
  MpaConfig c;
  c.speed_levels = {0.0, 0.4, 0.8, 1.2};
  c.steering_levels = {-0.3, -0.15, 0.0, 0.15, 0.3};
  return c;
}

VehicleState chain_pose(const VehicleState& base, const VehicleState& local) {
  const double c = std::cos(base.heading);
  const double s = std::sin(base.heading);
  return {base.x + c * local.x - s * local.y,
          base.y + s * local.x + c * local.y,
          wrap_angle(base.heading + local.heading), local.speed,
          local.steering};
}

int MotionPrimitiveAutomaton::state_index(double speed, double steering) const {
  for (int q = 0; q < n_states(); ++q)
    if (states_[q].speed == speed && states_[q].steering == steering) return q;
  throw std::invalid_argument("no automaton state for the given levels");
}

const std::vector<int>& MotionPrimitiveAutomaton::admissible(
    int q, int position) const {
  return admissible_.at(q).at(position);
}

int MotionPrimitiveAutomaton::standstill_primitive(int q) const {
  if (!is_final(q))
    throw std::invalid_argument("state " + std::to_string(q) +
                                " is not a standstill state");
  for (int id : outgoing_[q]) {
    const MotionPrimitive& mp = primitives_[id];
    if (mp.to == q && states_[mp.to].speed == 0.0 &&
        mp.input.accel == 0.0 && mp.input.steer_rate == 0.0)
      return id;
  }
  throw std::logic_error("standstill state lacks its self loop");
}

MotionPrimitiveAutomaton MotionPrimitiveAutomaton::generate(
    const MpaConfig& config) {
  if (config.speed_levels.empty() || config.speed_levels.front() != 0.0)
    throw std::invalid_argument("speed levels must start at 0");
  if (!std::is_sorted(config.speed_levels.begin(), config.speed_levels.end()) ||
      !std::is_sorted(config.steering_levels.begin(),
                      config.steering_levels.end()))
    throw std::invalid_argument("level lists must be ascending");
  if (config.horizon < 1 || config.trajectory_samples < 2 ||
      config.occupancy_poses < 2)
    throw std::invalid_argument("degenerate automaton configuration");

  MotionPrimitiveAutomaton mpa;
  mpa.config_ = config;
  for (double v : config.speed_levels)
    for (double d : config.steering_levels) mpa.states_.push_back({v, d});

  const double ts = config.step_duration;
  const double eps = 1e-9;
  for (int from = 0; from < mpa.n_states(); ++from) {
    for (int to = 0; to < mpa.n_states(); ++to) {
      const AutomatonState& a = mpa.states_[from];
      const AutomatonState& b = mpa.states_[to];
      if (std::abs(b.speed - a.speed) > config.max_accel * ts + eps) continue;
      if (std::abs(b.steering - a.steering) > config.max_steer_rate * ts + eps)
        continue;

      MotionPrimitive mp;
      mp.from = from;
      mp.to = to;
      // Linear ramps between the levels, i.e. constant inputs.
      mp.input = {(b.speed - a.speed) / ts, (b.steering - a.steering) / ts};

      VehicleState s{0.0, 0.0, 0.0, a.speed, a.steering};
      mp.states.push_back(s);
      const auto input = [&mp](double) { return mp.input; };
      const double dt = ts / config.trajectory_samples;
      for (int i = 0; i < config.trajectory_samples; ++i) {
        s = integrate(config.vehicle, s, input, dt, 10);
        mp.states.push_back(s);
      }
      // The levels are met exactly by construction; snap away the
      // integration round-off so chained plans stay on the level grid.
      mp.states.back().speed = b.speed;
      mp.states.back().steering = b.steering;

      std::vector<Vec2> corners;
      for (int j = 0; j < config.occupancy_poses; ++j) {
        const int idx = static_cast<int>(
            std::lround(static_cast<double>(j) *
                        (mp.states.size() - 1) / (config.occupancy_poses - 1)));
        const ConvexPolygon box = footprint(config.vehicle, mp.states[idx],
                                            config.occupancy_margin);
        corners.insert(corners.end(), box.vertices.begin(), box.vertices.end());
      }
      mp.occupancy = convex_hull(corners);
      mpa.primitives_.push_back(std::move(mp));
    }
  }

  mpa.outgoing_.assign(mpa.n_states(), {});
  for (int id = 0; id < static_cast<int>(mpa.primitives_.size()); ++id)
    mpa.outgoing_[mpa.primitives_[id].from].push_back(id);

  mpa.build_derived();
  return mpa;
}

void MotionPrimitiveAutomaton::build_derived() {
  const int n = n_states();
  const int h = config_.horizon;

  // Braking distance per state: BFS backwards from all speed-0 states.
  steps_to_stop_.assign(n, std::numeric_limits<int>::max());
  std::deque<int> queue;
  for (int q = 0; q < n; ++q)
    if (is_final(q)) {
      steps_to_stop_[q] = 0;
      queue.push_back(q);
    }
  while (!queue.empty()) {
    const int q = queue.front();
    queue.pop_front();
    for (const MotionPrimitive& mp : primitives_) {
      if (mp.to != q) continue;
      if (steps_to_stop_[mp.from] != std::numeric_limits<int>::max()) continue;
      steps_to_stop_[mp.from] = steps_to_stop_[q] + 1;
      queue.push_back(mp.from);
    }
  }
  for (int q = 0; q < n; ++q)
    if (steps_to_stop_[q] > h)
      throw std::invalid_argument(
          "state " + std::to_string(q) +
          " cannot reach standstill within the horizon");

  // Forward reachability from the plain standstill state; every level pair
  // must be usable within one horizon or the level grid is miswired.
  {
    const int q0 = state_index(0.0, config_.steering_levels[
        config_.steering_levels.size() / 2]);
    std::vector<int> dist(n, std::numeric_limits<int>::max());
    dist[q0] = 0;
    std::deque<int> bfs{q0};
    while (!bfs.empty()) {
      const int q = bfs.front();
      bfs.pop_front();
      for (int id : outgoing_[q])
        if (dist[primitives_[id].to] == std::numeric_limits<int>::max()) {
          dist[primitives_[id].to] = dist[q] + 1;
          bfs.push_back(primitives_[id].to);
        }
    }
    for (int q = 0; q < n; ++q)
      if (dist[q] > h)
        throw std::invalid_argument(
            "state " + std::to_string(q) +
            " not reachable from standstill within the horizon");
  }

  // A transition into q' occupying horizon position l is admissible iff
  // q' can still stop in the remaining h-(l+1) steps.
  admissible_.assign(n, std::vector<std::vector<int>>(h));
  for (int q = 0; q < n; ++q)
    for (int l = 0; l < h; ++l)
      for (int id : outgoing_[q])
        if (steps_to_stop_[primitives_[id].to] <= h - (l + 1))
          admissible_[q][l].push_back(id);

  // Reachable occupancy per start state and horizon step. Pose sets are
  // tracked per automaton state as a position hull plus a heading interval;
  // arcs swept by the interval are covered by sampling support angles and
  // scaling them onto the enclosing secant polygon.
  reachable_.assign(n, {});
  struct PoseSet {
    std::vector<Vec2> positions;
    double lo = 0.0, hi = 0.0;
    bool empty = true;
  };
  const auto hull_down = [](std::vector<Vec2>& pts) {
    if (pts.size() < 4) return;
    ConvexPolygon hull = convex_hull(pts);
    if (hull.vertices.size() >= 3) pts = hull.vertices;
  };

  for (int q0 = 0; q0 < n; ++q0) {
    std::vector<PoseSet> cur(n);
    cur[q0] = {{{0.0, 0.0}}, 0.0, 0.0, false};
    reachable_[q0].reserve(h);
    for (int l = 0; l < h; ++l) {
      std::vector<Vec2> step_points;
      std::vector<PoseSet> next(n);
      for (int q = 0; q < n; ++q) {
        if (cur[q].empty) continue;
        double width = cur[q].hi - cur[q].lo;
        if (width > 2.0 * M_PI) width = 2.0 * M_PI;
        const int k = std::max(2, static_cast<int>(std::ceil(width / 0.1)) + 1);
        const double gap = width / (k - 1);
        const double scale = 1.0 / std::cos(gap / 2.0);
        std::vector<std::pair<double, double>> cs;  // cos/sin per sample
        cs.reserve(k);
        for (int a = 0; a < k; ++a) {
          const double ang = cur[q].lo + gap * a;
          cs.push_back({std::cos(ang), std::sin(ang)});
        }

        for (int id : admissible_[q][l]) {
          const MotionPrimitive& mp = primitives_[id];
          // Outer hull of the occupancy under every heading in the
          // interval, then the Minkowski sum with the position set. Both
          // factors are convex, so summing hull vertices pairwise loses
          // nothing.
          std::vector<Vec2> rotated;
          rotated.reserve(k * mp.occupancy.vertices.size());
          for (const auto& [c, s] : cs)
            for (const Vec2& ov : mp.occupancy.vertices)
              rotated.push_back({(c * ov.x - s * ov.y) * scale,
                                 (s * ov.x + c * ov.y) * scale});
          hull_down(rotated);
          std::vector<Vec2> occ_points;
          occ_points.reserve(cur[q].positions.size() * rotated.size());
          for (const Vec2& pv : cur[q].positions)
            for (const Vec2& rv : rotated)
              occ_points.push_back({pv.x + rv.x, pv.y + rv.y});
          hull_down(occ_points);
          step_points.insert(step_points.end(), occ_points.begin(),
                             occ_points.end());

          const VehicleState& end = mp.states.back();
          PoseSet& tgt = next[mp.to];
          for (const Vec2& pv : cur[q].positions)
            for (const auto& [c, s] : cs)
              tgt.positions.push_back({pv.x + (c * end.x - s * end.y) * scale,
                                       pv.y + (s * end.x + c * end.y) * scale});
          const double nlo = cur[q].lo + end.heading;
          const double nhi = cur[q].hi + end.heading;
          if (tgt.empty) {
            tgt.lo = nlo;
            tgt.hi = nhi;
            tgt.empty = false;
          } else {
            tgt.lo = std::min(tgt.lo, nlo);
            tgt.hi = std::max(tgt.hi, nhi);
          }
        }
      }
      for (PoseSet& ps : next)
        if (!ps.empty) hull_down(ps.positions);
      reachable_[q0].push_back(convex_hull(step_points));
      cur = std::move(next);
    }
  }
}

namespace {

nlohmann::json state_to_json(const VehicleState& s) {
  return {s.x, s.y, s.heading, s.speed, s.steering};
}

VehicleState state_from_json(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(),
          j.at(3).get<double>(), j.at(4).get<double>()};
}

}  // namespace

nlohmann::json MotionPrimitiveAutomaton::to_json() const {
  nlohmann::json j;
  j["config"] = {{"speed_levels", config_.speed_levels},
                 {"steering_levels", config_.steering_levels},
                 {"step_duration", config_.step_duration},
                 {"horizon", config_.horizon},
                 {"max_accel", config_.max_accel},
                 {"max_steer_rate", config_.max_steer_rate},
                 {"trajectory_samples", config_.trajectory_samples},
                 {"occupancy_poses", config_.occupancy_poses},
                 {"occupancy_margin", config_.occupancy_margin},
                 {"vehicle",
                  {{"wheelbase", config_.vehicle.wheelbase},
                   {"rear_to_cg", config_.vehicle.rear_to_cg},
                   {"body_length", config_.vehicle.body_length},
                   {"body_width", config_.vehicle.body_width}}}};
  j["states"] = nlohmann::json::array();
  for (const AutomatonState& s : states_)
    j["states"].push_back({s.speed, s.steering});
  j["primitives"] = nlohmann::json::array();
  for (const MotionPrimitive& mp : primitives_) {
    nlohmann::json p;
    p["from"] = mp.from;
    p["to"] = mp.to;
    p["input"] = {mp.input.accel, mp.input.steer_rate};
    p["states"] = nlohmann::json::array();
    for (const VehicleState& s : mp.states) p["states"].push_back(state_to_json(s));
    p["occupancy"] = nlohmann::json::array();
    for (const Vec2& v : mp.occupancy.vertices) p["occupancy"].push_back({v.x, v.y});
    j["primitives"].push_back(std::move(p));
  }
  return j;
}

MotionPrimitiveAutomaton MotionPrimitiveAutomaton::from_json(
    const nlohmann::json& j) {
  MotionPrimitiveAutomaton mpa;
  const nlohmann::json& c = j.at("config");
  mpa.config_.speed_levels = c.at("speed_levels").get<std::vector<double>>();
  mpa.config_.steering_levels =
      c.at("steering_levels").get<std::vector<double>>();
  mpa.config_.step_duration = c.at("step_duration").get<double>();
  mpa.config_.horizon = c.at("horizon").get<int>();
  mpa.config_.max_accel = c.at("max_accel").get<double>();
  mpa.config_.max_steer_rate = c.at("max_steer_rate").get<double>();
  mpa.config_.trajectory_samples = c.at("trajectory_samples").get<int>();
  mpa.config_.occupancy_poses = c.at("occupancy_poses").get<int>();
  mpa.config_.occupancy_margin = c.at("occupancy_margin").get<double>();
  const nlohmann::json& v = c.at("vehicle");
  mpa.config_.vehicle = {v.at("wheelbase").get<double>(),
                         v.at("rear_to_cg").get<double>(),
                         v.at("body_length").get<double>(),
                         v.at("body_width").get<double>()};
  for (const auto& s : j.at("states"))
    mpa.states_.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
  for (const auto& p : j.at("primitives")) {
    MotionPrimitive mp;
    mp.from = p.at("from").get<int>();
    mp.to = p.at("to").get<int>();
    mp.input = {p.at("input").at(0).get<double>(),
                p.at("input").at(1).get<double>()};
    for (const auto& s : p.at("states")) mp.states.push_back(state_from_json(s));
    for (const auto& vv : p.at("occupancy"))
      mp.occupancy.vertices.push_back({vv.at(0).get<double>(), vv.at(1).get<double>()});
    mpa.primitives_.push_back(std::move(mp));
  }
  mpa.outgoing_.assign(mpa.n_states(), {});
  for (int id = 0; id < static_cast<int>(mpa.primitives_.size()); ++id)
    mpa.outgoing_[mpa.primitives_[id].from].push_back(id);
  mpa.build_derived();
  return mpa;
}

}  // namespace mpp
