#include "mpp/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <utility>

#include "mpp/error.hpp"
#include "mpp/rng.hpp"
#include "mpp/timing.hpp"

namespace mpp {

namespace {

constexpr std::uint64_t kPlanSalt = 0x706c616e;      // per-agent planning seeds
constexpr std::uint64_t kScheduleSalt = 0x73636864;  // schedule construction
constexpr std::uint64_t kRandomSalt = 0x70726e64;    // random prioritization
constexpr double kSecondsPerExpansion = 1e-4;        // synthetic solve time
constexpr double kWallPostHalf = 0.05;
constexpr double kWallSpacing = 0.05;

std::size_t occupancy_bytes(const std::vector<ConvexPolygon>& occ) {
  std::size_t doubles = 0;
  for (const ConvexPolygon& p : occ) doubles += 2 * p.vertices.size();
  return doubles * sizeof(double);
}

ReferenceTrajectory make_reference(const World& w, const SimVehicle& v) {
  const LanePath& path = w.paths.at(static_cast<std::size_t>(v.path));
  ReferenceTrajectory ref;
  ref.reserve(static_cast<std::size_t>(w.config.horizon));
  for (int l = 1; l <= w.config.horizon; ++l) {
    const PathPose p =
        path.pose_at(v.arc + l * v.reference_speed * w.config.step_duration);
    ref.push_back(VehicleState{p.position.x, p.position.y, p.heading,
                               v.reference_speed, 0.0});
  }
  return ref;
}

/// Plans every agent once, slot by slot, fetching the trajectories of
/// coupled agents from earlier slots as obstacles. The planning seed
/// depends only on (seed, step, agent), so the resulting plans are a
/// function of the induced orientation alone: any two sequences that
/// orient the coupling graph identically produce identical rows.
RowOutcome solve_row(const World& w, const UndirectedCouplingGraph& coupling,
                     const ComputationSequence& seq, int row_index,
                     std::uint64_t seed) {
  const int n = static_cast<int>(w.vehicles.size());
  const int horizon = w.config.horizon;
  RowOutcome out;
  out.sequence = seq;
  out.plans.resize(static_cast<std::size_t>(n));
  out.solve_times.assign(static_cast<std::size_t>(n), 0.0);

  std::vector<int> slot_of(static_cast<std::size_t>(n) + 1, -1);
  for (int s = 0; s < static_cast<int>(seq.size()); ++s)
    for (AgentId a : seq[static_cast<std::size_t>(s)]) slot_of[static_cast<std::size_t>(a)] = s;

  // Occupancies already planned in this row, indexed by agent.
  std::vector<std::vector<ConvexPolygon>> occ(static_cast<std::size_t>(n) + 1);

  for (std::size_t s = 0; s < seq.size(); ++s) {
    for (AgentId a : seq[s]) {
      const SimVehicle& v = w.vehicles[static_cast<std::size_t>(a - 1)];

      PlanningProblem prob;
      prob.initial_state = v.state;
      prob.initial_automaton_state = v.automaton_state;
      prob.reference = make_reference(w, v);
      prob.obstacles.assign(static_cast<std::size_t>(horizon),
                            std::vector<ConvexPolygon>{});
      if (!w.walls.empty())
        for (auto& stepObstacles : prob.obstacles)
          stepObstacles = w.walls[static_cast<std::size_t>(v.path)];
      for (AgentId p : coupling.neighbors(a)) {
        if (slot_of[static_cast<std::size_t>(p)] >= static_cast<int>(s)) continue;
        for (int l = 0; l < horizon; ++l)
          prob.obstacles[static_cast<std::size_t>(l)].push_back(
              occ[static_cast<std::size_t>(p)][static_cast<std::size_t>(l)]);
        out.messages.push_back({row_index, static_cast<int>(s), p, a,
                                occupancy_bytes(occ[static_cast<std::size_t>(p)])});
      }

      const std::uint64_t plan_seed = mix_seed(
          mix_seed(mix_seed(seed, kPlanSalt), static_cast<std::uint64_t>(w.step)),
          static_cast<std::uint64_t>(a));
      const auto t0 = std::chrono::steady_clock::now();
      PlanResult plan = mcts_plan(w.mpa, prob, w.config.mcts_budget, plan_seed);
      if (!plan.feasible) {
        const int searched = plan.expansions;
        plan = fallback_plan(w.mpa, v.last_plan, prob.reference);
        plan.expansions = searched;  // keep the consumed search effort
      }
      const auto t1 = std::chrono::steady_clock::now();
      out.solve_times[static_cast<std::size_t>(a - 1)] =
          w.config.synthetic_timing
              ? plan.expansions * kSecondsPerExpansion
              : std::chrono::duration<double>(t1 - t0).count();

      auto& own = occ[static_cast<std::size_t>(a)];
      own.reserve(static_cast<std::size_t>(horizon));
      for (int l = 0; l < horizon; ++l)
        own.push_back(plan_step_occupancy(w.mpa, plan, l));
      out.plans[static_cast<std::size_t>(a - 1)] = std::move(plan);
    }
  }
  // Summed in agent order, not solve order: rows that induce the same
  // orientation then agree on the cost bit for bit.
  for (const PlanResult& p : out.plans) out.cost += p.cost;
  return out;
}

int argmin_row(const std::vector<RowOutcome>& rows) {
  int best = 0;
  for (int r = 1; r < static_cast<int>(rows.size()); ++r)
    if (rows[static_cast<std::size_t>(r)].cost <
        rows[static_cast<std::size_t>(best)].cost)
      best = r;
  return best;
}

}  // namespace

World build_world(const ScenarioConfig& config) {
  return build_world(config, MotionPrimitiveAutomaton::generate(config.mpa_config()));
}

World build_world(const ScenarioConfig& config, MotionPrimitiveAutomaton mpa) {
  World w{config, std::move(mpa), {}, {}, {}, {}, 0};
  w.paths = build_paths(config.map);
  if (config.lane_keeping)
    for (const LanePath& p : w.paths)
      w.walls.push_back(
          corridor_walls(p, config.lane_width, kWallPostHalf, kWallSpacing));

  const double steer0 =
      config.steering_levels.at(config.steering_levels.size() / 2);
  const int q0 = w.mpa.state_index(0.0, steer0);
  const int standstill = w.mpa.standstill_primitive(q0);
  for (const VehicleSpec& spec : config.vehicles) {
    SimVehicle v;
    v.path = spec.path;
    v.reference_speed = spec.reference_speed;
    const LanePath& path = w.paths.at(static_cast<std::size_t>(spec.path));
    v.arc = spec.start_fraction * path.length();
    const PathPose pose = path.pose_at(v.arc);
    v.state = VehicleState{pose.position.x, pose.position.y, pose.heading, 0.0,
                           steer0};
    v.automaton_state = q0;
    v.last_plan.feasible = true;
    v.last_plan.primitive_ids.assign(static_cast<std::size_t>(config.horizon),
                                     standstill);
    v.last_plan.states.assign(static_cast<std::size_t>(config.horizon) + 1,
                              v.state);
    v.last_plan.cost = 0.0;
    v.last_plan.expansions = 0;
    w.vehicles.push_back(std::move(v));
  }

  const VehicleParams& params = w.mpa.config().vehicle;
  std::vector<ConvexPolygon> bodies;
  for (const SimVehicle& v : w.vehicles)
    bodies.push_back(footprint(params, v.state));
  for (std::size_t i = 0; i < bodies.size(); ++i)
    for (std::size_t j = i + 1; j < bodies.size(); ++j)
      if (polygons_intersect(bodies[i], bodies[j]))
        throw std::invalid_argument("vehicles " + std::to_string(i) + " and " +
                                    std::to_string(j) + " start in collision");
  if (!w.walls.empty())
    for (std::size_t i = 0; i < w.vehicles.size(); ++i) {
      const ConvexPolygon inflated = footprint(
          params, w.vehicles[i].state, w.mpa.config().occupancy_margin);
      for (const ConvexPolygon& post :
           w.walls[static_cast<std::size_t>(w.vehicles[i].path)])
        if (polygons_intersect(inflated, post))
          throw std::invalid_argument("vehicle " + std::to_string(i) +
                                      " starts against its lane fence");
    }

  w.retained = p_constant(static_cast<int>(w.vehicles.size()));
  return w;
}

UndirectedCouplingGraph coupling_graph(const World& w) {
  const int n = static_cast<int>(w.vehicles.size());
  const int horizon = w.config.horizon;
  UndirectedCouplingGraph g(n);

  std::vector<std::vector<ConvexPolygon>> reach(static_cast<std::size_t>(n));
  std::vector<std::vector<Aabb>> boxes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const SimVehicle& v = w.vehicles[static_cast<std::size_t>(i)];
    const auto& local = w.mpa.reachable(v.automaton_state);
    for (int l = 0; l < horizon; ++l) {
      ConvexPolygon p = transform(local[static_cast<std::size_t>(l)],
                                  {v.state.x, v.state.y}, v.state.heading);
      boxes[static_cast<std::size_t>(i)].push_back(bounding_box(p));
      reach[static_cast<std::size_t>(i)].push_back(std::move(p));
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int l = 0; l < horizon; ++l) {
        const auto iu = static_cast<std::size_t>(i);
        const auto ju = static_cast<std::size_t>(j);
        const auto lu = static_cast<std::size_t>(l);
        if (boxes_overlap(boxes[iu][lu], boxes[ju][lu]) &&
            polygons_intersect(reach[iu][lu], reach[ju][lu])) {
          g.add_edge(i + 1, j + 1);
          break;
        }
      }
  return g;
}

StepOutcome evaluate_step(const World& w, Strategy strategy,
                          std::uint64_t seed) {
  StepOutcome out;
  out.step = w.step;
  out.strategy = strategy;
  out.coupling = coupling_graph(w);
  const int n = static_cast<int>(w.vehicles.size());
  const auto k = static_cast<std::uint64_t>(w.step);

  const auto single = [&](const Prioritization& p) {
    const DirectedCouplingGraph dag = orient(out.coupling, p);
    const ComputationSequence seq = find_agent_classes(dag).value();
    RowOutcome row = solve_row(w, out.coupling, seq, 0, seed);
    out.n_classes = static_cast<int>(seq.size());
    out.networked_time = networked_time_single(dag, row.solve_times);
    out.rows.push_back(std::move(row));
  };

  switch (strategy) {
    case Strategy::Constant:
      single(p_constant(n));
      break;
    case Strategy::Random:
      single(p_random(n, mix_seed(mix_seed(seed, kRandomSalt), k)));
      break;
    case Strategy::Constraint:
      single(p_constraint(out.coupling));
      break;
    case Strategy::Color:
      single(p_color(out.coupling));
      break;
    case Strategy::Optimal: {
      const std::vector<DirectedCouplingGraph> orientations =
          enumerate_acyclic_orientations(out.coupling);
      if (static_cast<int>(orientations.size()) > w.config.orientation_cap)
        throw CapacityError(
            "acyclic orientation count " + std::to_string(orientations.size()) +
            " exceeds orientation_cap " +
            std::to_string(w.config.orientation_cap));
      out.orientations = static_cast<int>(orientations.size());
      for (int r = 0; r < static_cast<int>(orientations.size()); ++r) {
        const auto& dag = orientations[static_cast<std::size_t>(r)];
        const ComputationSequence seq = find_agent_classes(dag).value();
        RowOutcome row = solve_row(w, out.coupling, seq, r, seed);
        out.networked_time += networked_time_single(dag, row.solve_times);
        out.rows.push_back(std::move(row));
      }
      out.selected_row = argmin_row(out.rows);
      out.n_classes = static_cast<int>(
          out.rows[static_cast<std::size_t>(out.selected_row)].sequence.size());
      break;
    }
    case Strategy::Explore: {
      const DirectedCouplingGraph dag0 = orient(out.coupling, w.retained);
      const ComputationSequence seq0 = find_agent_classes(dag0).value();
      const int n_classes = static_cast<int>(seq0.size());
      out.n_classes = n_classes;
      const ScheduleMatrix full =
          build_schedule(n_classes, mix_seed(mix_seed(seed, kScheduleSalt), k));
      int executed = n_classes;
      if (w.config.class_cap) executed = std::min(executed, *w.config.class_cap);
      out.schedule.rows.assign(full.rows.begin(), full.rows.begin() + executed);

      std::vector<std::vector<double>> times;
      for (int r = 0; r < executed; ++r) {
        ComputationSequence seq(static_cast<std::size_t>(n_classes));
        for (int slot = 0; slot < n_classes; ++slot)
          seq[static_cast<std::size_t>(slot)] =
              seq0[static_cast<std::size_t>(
                  out.schedule.rows[static_cast<std::size_t>(r)]
                                   [static_cast<std::size_t>(slot)])];
        RowOutcome row = solve_row(w, out.coupling, seq, r, seed);
        times.push_back(row.solve_times);
        out.rows.push_back(std::move(row));
      }
      out.networked_time =
          networked_time_explore(out.coupling, seq0, out.schedule, times);
      out.selected_row = argmin_row(out.rows);
      break;
    }
  }
  return out;
}

CollisionError::CollisionError(int step_, AgentId first_, AgentId second_,
                               int sample_)
    : std::runtime_error("vehicles " + std::to_string(first_) + " and " +
                         std::to_string(second_) + " collide during step " +
                         std::to_string(step_) + " (trajectory sample " +
                         std::to_string(sample_) + ")"),
      step(step_),
      first(first_),
      second(second_),
      sample(sample_) {}

void apply_step(World& w, const StepOutcome& outcome) {
  if (outcome.step != w.step)
    throw std::logic_error("step outcome does not match the world step");
  const RowOutcome& row =
      outcome.rows.at(static_cast<std::size_t>(outcome.selected_row));
  const int n = static_cast<int>(w.vehicles.size());
  const VehicleParams& params = w.mpa.config().vehicle;

  // Audit the step about to be executed: exact body footprints along every
  // integration sample of the first primitive, no inflation, touching
  // counts as contact.
  const int samples = w.mpa.config().trajectory_samples + 1;
  std::vector<std::vector<ConvexPolygon>> swept(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const SimVehicle& v = w.vehicles[static_cast<std::size_t>(i)];
    const MotionPrimitive& prim = w.mpa.primitive(
        row.plans[static_cast<std::size_t>(i)].primitive_ids.at(0));
    for (int t = 0; t < samples; ++t)
      swept[static_cast<std::size_t>(i)].push_back(footprint(
          params,
          chain_pose(v.state, prim.states[static_cast<std::size_t>(t)])));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int t = 0; t < samples; ++t)
        if (polygons_intersect(
                swept[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)],
                swept[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)]))
          throw CollisionError(w.step, i + 1, j + 1, t);

  const double window =
      std::max(0.5, 2.0 * w.config.speed_levels.back() * w.config.step_duration);
  for (int i = 0; i < n; ++i) {
    SimVehicle& v = w.vehicles[static_cast<std::size_t>(i)];
    const PlanResult& plan = row.plans[static_cast<std::size_t>(i)];
    v.state = plan.states.at(1);
    v.automaton_state = w.mpa.primitive(plan.primitive_ids.at(0)).to;
    v.arc = w.paths[static_cast<std::size_t>(v.path)].advance(
        v.arc, {v.state.x, v.state.y}, window);
    v.last_plan = plan;
  }
  w.retained = priorities_from_sequence(row.sequence, n);
  w.step += 1;
}

StepRecord record_outcome(const StepOutcome& o) {
  StepRecord r;
  r.step = o.step;
  r.coupling_edges.assign(o.coupling.edges().begin(), o.coupling.edges().end());
  r.n_classes = o.n_classes;
  r.n_rows = static_cast<int>(o.rows.size());
  r.orientations = o.orientations;
  r.selected_row = o.selected_row;
  const RowOutcome& sel = o.rows.at(static_cast<std::size_t>(o.selected_row));
  r.selected_cost = sel.cost;
  for (const RowOutcome& row : o.rows) {
    r.row_costs.push_back(row.cost);
    r.messages += static_cast<int>(row.messages.size());
    for (const MessageRecord& m : row.messages) r.message_bytes += m.bytes;
  }
  r.networked_time = o.networked_time;
  for (const PlanResult& p : sel.plans) {
    r.expansions += p.expansions;
    if (p.used_fallback) ++r.fallbacks;
  }
  r.executed_plans = sel.plans;
  return r;
}

ExperimentResult run_experiment(const ScenarioConfig& config,
                                std::uint64_t seed) {
  return run_experiment(config, seed,
                        MotionPrimitiveAutomaton::generate(config.mpa_config()));
}

ExperimentResult run_experiment(const ScenarioConfig& config,
                                std::uint64_t seed,
                                MotionPrimitiveAutomaton mpa) {
  World w = build_world(config, std::move(mpa));
  ExperimentResult res;
  res.config = config;
  res.seed = seed;
  res.trajectories.assign(w.vehicles.size(), {});
  for (std::size_t i = 0; i < w.vehicles.size(); ++i)
    res.trajectories[i].push_back(w.vehicles[i].state);

  const int n_steps = config.n_steps();
  for (int k = 0; k < n_steps; ++k) {
    const StepOutcome outcome = evaluate_step(w, config.strategy, seed);
    apply_step(w, outcome);
    res.steps.push_back(record_outcome(outcome));
    for (std::size_t i = 0; i < w.vehicles.size(); ++i)
      res.trajectories[i].push_back(w.vehicles[i].state);
    res.total_cost += res.steps.back().selected_cost;
    res.total_time += res.steps.back().networked_time;
    res.mean_classes += res.steps.back().n_classes;
  }
  if (n_steps > 0) res.mean_classes /= n_steps;
  return res;
}

}  // namespace mpp
