#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpp/error.hpp"
#include "mpp/mapf.hpp"
#include "mpp/rng.hpp"
#include "oracles.hpp"

using namespace mpp;
using nlohmann::json;

namespace {

GridInstance fixture(const std::string& base) {
  const std::string dir = std::string(MPP_FIXTURE_DIR) + "/mapf/";
  return load_instance(dir + base + ".map", dir + base + ".json");
}

std::vector<std::vector<int>> all_orders(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

// Shared shape requirements for any plan claimed to solve an instance.
void check_solution_shape(const GridInstance& inst, const MapfPlan& plan) {
  REQUIRE(plan.size() == static_cast<std::size_t>(inst.n_agents()));
  for (int i = 0; i < inst.n_agents(); ++i) {
    REQUIRE(plan[i].size() == static_cast<std::size_t>(inst.time_limit) + 1);
    CHECK(plan[i].front() == inst.starts[i]);
    CHECK(plan[i].back() == inst.targets[i]);
    for (std::size_t k = 0; k + 1 < plan[i].size(); ++k) {
      const auto moves = inst.map.moves_from(plan[i][k]);
      CHECK(std::count(moves.begin(), moves.end(), plan[i][k + 1]) == 1);
    }
  }
  CHECK(detect_conflicts(plan).empty());
}

}  // namespace

TEST_CASE("grid maps parse dimensions, walls and moves") {
  const GridMap g = parse_grid("##.##\n.....\n#..##\n##.##\n");
  CHECK(g.height() == 4);
  CHECK(g.width() == 5);
  CHECK(g.n_cells() == 20);
  CHECK(g.n_free() == 9);
  CHECK(g.free_at(g.cell(1, 0)));
  CHECK_FALSE(g.free_at(g.cell(0, 0)));
  CHECK(g.row_of(g.cell(2, 3)) == 2);
  CHECK(g.col_of(g.cell(2, 3)) == 3);

  // Stay, north, east, south, west, with blocked directions dropped.
  CHECK(g.moves_from(g.cell(1, 2)) ==
        std::vector<int>{g.cell(1, 2), g.cell(0, 2), g.cell(1, 3),
                         g.cell(2, 2), g.cell(1, 1)});
  CHECK(g.moves_from(g.cell(1, 0)) ==
        std::vector<int>{g.cell(1, 0), g.cell(1, 1)});
  CHECK(g.moves_from(g.cell(3, 2)) ==
        std::vector<int>{g.cell(3, 2), g.cell(2, 2)});
}

TEST_CASE("grid parsing rejects malformed text") {
  CHECK_THROWS_AS(parse_grid(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("..\n...\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("..x\n...\n"), std::invalid_argument);
  // Blank lines and trailing carriage returns are tolerated.
  const GridMap g = parse_grid("..\r\n\n..\r\n");
  CHECK(g.height() == 2);
  CHECK(g.width() == 2);
}

TEST_CASE("instance sidecars are validated field by field") {
  const std::string map = "...\n...\n";
  const json good{{"schema", 1},
                  {"starts", {{0, 0}, {1, 2}}},
                  {"targets", {{0, 2}, {1, 0}}},
                  {"time_limit", 6}};
  const GridInstance inst = parse_instance(map, good);
  CHECK(inst.n_agents() == 2);
  CHECK(inst.starts == std::vector<int>{inst.map.cell(0, 0),
                                        inst.map.cell(1, 2)});
  CHECK(inst.targets == std::vector<int>{inst.map.cell(0, 2),
                                         inst.map.cell(1, 0)});
  CHECK(inst.time_limit == 6);

  auto mutate = [&](const char* key, json value) {
    json j = good;
    j[key] = std::move(value);
    return j;
  };
  CHECK_THROWS_AS(parse_instance(map, json::array()), std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(map, mutate("schema", 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(map, mutate("time_limit", 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(map, mutate("time_limit", "six")),
                  std::invalid_argument);
  // Starts and targets must stay free, in bounds, paired and distinct.
  CHECK_THROWS_AS(parse_instance("#..\n...\n", good), std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(map, mutate("starts", {{0, 0}, {0, 3}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(map, mutate("starts", {{0, 0}, {0, 0}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(map, mutate("targets", {{0, 2}, {0, 2}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(map, mutate("starts", json::array({{0, 0}}))),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(map, mutate("starts", {{0, 0}, {0}})),
                  std::invalid_argument);
  {
    json j = good;
    j.erase("time_limit");
    CHECK_THROWS_AS(parse_instance(map, j), std::invalid_argument);
  }
}

TEST_CASE("standing agents on distinct cells never conflict") {
  const MapfPlan plans{{0, 0, 0, 0}, {5, 5, 5, 5}};
  CHECK(detect_conflicts(plans).empty());
}

TEST_CASE("vertex conflicts carry the shared cell and time") {
  // Both agents reach cell 7 at step 2.
  const MapfPlan plans{{1, 4, 7, 8}, {13, 10, 7, 4}};
  const auto conflicts = detect_conflicts(plans);
  REQUIRE(conflicts.size() == 1);
  CHECK(conflicts[0] == GridConflict{1, 2, 7, 7, 2, false});
}

TEST_CASE("swapping along an edge is reported as an edge conflict") {
  const MapfPlan plans{{3, 4, 4}, {4, 3, 3}};
  const auto conflicts = detect_conflicts(plans);
  REQUIRE(conflicts.size() == 1);
  CHECK(conflicts[0] == GridConflict{1, 2, 3, 4, 0, true});
}

TEST_CASE("conflicts are listed by time with vertex before edge") {
  const MapfPlan plans{{1, 2, 9, 9}, {2, 1, 9, 8}};
  const auto conflicts = detect_conflicts(plans);
  REQUIRE(conflicts.size() == 2);
  CHECK(conflicts[0].edge);
  CHECK(conflicts[0].step == 0);
  CHECK_FALSE(conflicts[1].edge);
  CHECK(conflicts[1].step == 2);
  CHECK_THROWS_AS(detect_conflicts(MapfPlan{{1, 2}, {3}}),
                  std::invalid_argument);
}

TEST_CASE("disjoint corridors are feasible for every solve order") {
  const GridInstance inst = parse_instance(
      ".....\n#####\n.....\n#####\n.....\n",
      json{{"schema", 1},
           {"starts", {{0, 0}, {2, 0}, {4, 0}}},
           {"targets", {{0, 4}, {2, 4}, {4, 4}}},
           {"time_limit", 6}});
  for (const auto& order : all_orders(3)) {
    const auto plan = pp_solve_grid(inst, order);
    REQUIRE(plan.has_value());
    check_solution_shape(inst, *plan);
  }
  const auto report = classify_solvability(inst);
  CHECK(report.kind == SolvabilityClass::PSolvable);
  CHECK(report.order == std::vector<int>{0, 1, 2});
  check_solution_shape(inst, report.plan);
}

TEST_CASE("solve orders must be permutations of the agents") {
  const GridInstance inst = fixture("corridor");
  CHECK_THROWS_AS(pp_solve_grid(inst, {0}), std::invalid_argument);
  CHECK_THROWS_AS(pp_solve_grid(inst, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(pp_solve_grid(inst, {0, 2}), std::invalid_argument);
}

TEST_CASE("bottleneck instance needs the junction agent to plan last") {
  const GridInstance inst = fixture("cross");
  REQUIRE(inst.n_agents() == 3);
  int feasible = 0;
  for (const auto& order : all_orders(3)) {
    const auto plan = pp_solve_grid(inst, order);
    if (order.back() == 1) {
      REQUIRE(plan.has_value());
      check_solution_shape(inst, *plan);
      ++feasible;
    } else {
      CHECK_FALSE(plan.has_value());
    }
  }
  CHECK(feasible == 2);
}

TEST_CASE("head-on corridor swap is infeasible for both orders") {
  const GridInstance inst = fixture("corridor");
  REQUIRE(inst.n_agents() == 2);
  for (const auto& order : all_orders(2)) {
    CHECK_FALSE(pp_solve_grid(inst, order).has_value());
  }
  // The instance is unsolvable outright, not merely for the planner.
  CHECK_FALSE(oracle::joint_plan_exists(inst));
}

TEST_CASE("committed fixtures classify into the three classes") {
  const auto cross = classify_solvability(fixture("cross"));
  CHECK(cross.kind == SolvabilityClass::PSolvable);
  CHECK(cross.order == std::vector<int>{0, 2, 1});

  const auto corridor = classify_solvability(fixture("corridor"));
  CHECK(corridor.kind == SolvabilityClass::PpUnsolvable);
  CHECK(corridor.plan.empty());

  const auto pocket = classify_solvability(fixture("pocket"));
  CHECK(pocket.kind == SolvabilityClass::TpSolvableOnly);
  check_solution_shape(fixture("pocket"), pocket.plan);

  CHECK(solvability_name(cross.kind) == "P_SOLVABLE");
  CHECK(solvability_name(pocket.kind) == "TP_SOLVABLE_ONLY");
  CHECK(solvability_name(corridor.kind) == "PP_UNSOLVABLE");
}

TEST_CASE("pocket certificate flips the ordering at the third step") {
  const GridInstance inst = fixture("pocket");
  const auto report = classify_solvability(inst);
  REQUIRE(report.kind == SolvabilityClass::TpSolvableOnly);
  const auto& orderings = report.schedule.orderings;
  REQUIRE(orderings.size() >= 3);
  CHECK(orderings[0] == std::vector<int>{0, 1});
  CHECK(orderings[1] == orderings[0]);
  CHECK(orderings[2] == std::vector<int>{1, 0});

  // Replaying the certificate reproduces a conflict-free solution.
  const auto replay = tp_solve_grid(inst, report.schedule);
  REQUIRE(replay.has_value());
  check_solution_shape(inst, *replay);

  // No fixed order works, even through the windowed executor.
  for (const auto& order : all_orders(2)) {
    TpSchedule constant;
    constant.orderings.assign(inst.time_limit, order);
    CHECK_FALSE(tp_solve_grid(inst, constant).has_value());
    CHECK_FALSE(tp_solve_grid(inst, constant, inst.time_limit).has_value());
  }
}

TEST_CASE("windowed executor validates its inputs") {
  const GridInstance inst = fixture("pocket");
  TpSchedule schedule;
  schedule.orderings.assign(2, {0, 1});
  CHECK_THROWS_AS(tp_solve_grid(inst, schedule, 0), std::invalid_argument);
  CHECK_THROWS_AS(
      tp_solve_grid(inst, TpSchedule{{{0, 0}, {0, 1}}}, kTpWindow),
      std::invalid_argument);
  // A schedule that runs out of orderings before the targets are reached
  // is an infeasible result, not an error.
  CHECK_FALSE(tp_solve_grid(inst, schedule).has_value());
}

TEST_CASE("every P-solvable fixture is solved by its constant schedule") {
  for (const std::string name : {"cross"}) {
    const GridInstance inst = fixture(name);
    const auto report = classify_solvability(inst);
    REQUIRE(report.kind == SolvabilityClass::PSolvable);
    TpSchedule constant;
    constant.orderings.assign(inst.time_limit, report.order);
    const auto plan = tp_solve_grid(inst, constant, inst.time_limit);
    REQUIRE(plan.has_value());
    check_solution_shape(inst, *plan);
  }
}

TEST_CASE("adding free space never breaks a solvable fixture") {
  // The corridor becomes time-variant solvable once a pocket is added.
  const GridInstance corridor = fixture("corridor");
  CHECK(classify_solvability(corridor).kind ==
        SolvabilityClass::PpUnsolvable);
  const GridInstance pocket = fixture("pocket");
  CHECK(classify_solvability(pocket).kind != SolvabilityClass::PpUnsolvable);

  // Widening the pocket to a full second row upgrades it further.
  const GridInstance wide = parse_instance(
      ".....\n.....\n", json{{"schema", 1},
                             {"starts", {{0, 0}, {0, 4}}},
                             {"targets", {{0, 4}, {0, 0}}},
                             {"time_limit", 8}});
  CHECK(classify_solvability(wide).kind == SolvabilityClass::PSolvable);

  // Opening a wall next to the junction keeps the bottleneck solvable.
  const GridInstance cross_open = parse_instance(
      "##.##\n.....\n#...#\n##.##\n",
      json{{"schema", 1},
           {"starts", {{1, 0}, {1, 1}, {0, 2}}},
           {"targets", {{1, 4}, {1, 2}, {3, 2}}},
           {"time_limit", 8}});
  CHECK(classify_solvability(cross_open).kind !=
        SolvabilityClass::PpUnsolvable);
}

TEST_CASE("classification agrees with the joint-plan oracle") {
  CHECK(oracle::joint_plan_exists(fixture("cross")));
  CHECK(oracle::joint_plan_exists(fixture("pocket")));
  CHECK_FALSE(oracle::joint_plan_exists(fixture("corridor")));

  // Random two-agent instances: a class other than PP_UNSOLVABLE implies
  // a joint plan, and no joint plan forces PP_UNSOLVABLE.
  SplitMix64 rng(2026);
  int checked = 0;
  while (checked < 40) {
    std::string text;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) text += rng.uniform01() < 0.75 ? '.' : '#';
      text += '\n';
    }
    GridMap map;
    try {
      map = parse_grid(text);
    } catch (const std::invalid_argument&) {
      continue;  // a row came out all walls is fine, blank lines are not
    }
    std::vector<int> free_cells;
    for (int cell = 0; cell < map.n_cells(); ++cell) {
      if (map.free_at(cell)) free_cells.push_back(cell);
    }
    if (free_cells.size() < 4) continue;
    auto pick = [&](int except) {
      int cell = except;
      while (cell == except) {
        cell = free_cells[rng.below(free_cells.size())];
      }
      return cell;
    };
    GridInstance inst;
    inst.map = map;
    inst.starts = {free_cells[rng.below(free_cells.size())], 0};
    inst.starts[1] = pick(inst.starts[0]);
    inst.targets = {free_cells[rng.below(free_cells.size())], 0};
    inst.targets[1] = pick(inst.targets[0]);
    inst.time_limit = 6;
    ++checked;

    const bool joint = oracle::joint_plan_exists(inst);
    const auto report = classify_solvability(inst);
    if (report.kind == SolvabilityClass::PpUnsolvable) {
      CHECK(report.plan.empty());
    } else {
      CHECK(joint);
      check_solution_shape(inst, report.plan);
    }
    if (!joint) {
      CHECK(report.kind == SolvabilityClass::PpUnsolvable);
    }
  }
}

TEST_CASE("classification guards its enumeration capacity") {
  const GridInstance many = parse_instance(
      "......\n",
      json{{"schema", 1},
           {"starts", {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}}},
           {"targets", {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}}},
           {"time_limit", 6}});
  CHECK_THROWS_AS(classify_solvability(many), CapacityError);

  const GridInstance deep = parse_instance(
      ".....\n", json{{"schema", 1},
                      {"starts", {{0, 0}, {0, 4}}},
                      {"targets", {{0, 4}, {0, 0}}},
                      {"time_limit", 13}});
  CHECK_THROWS_AS(classify_solvability(deep), CapacityError);
}

TEST_CASE("reports serialize class, certificate and plan") {
  const GridInstance cross = fixture("cross");
  const json p = report_to_json(cross, classify_solvability(cross));
  CHECK(p["schema"] == 1);
  CHECK(p["class"] == "P_SOLVABLE");
  CHECK(p["n_agents"] == 3);
  CHECK(p["time_limit"] == 8);
  CHECK(p["order"] == json::array({1, 3, 2}));
  CHECK_FALSE(p.contains("schedule"));
  REQUIRE(p["plan"].size() == 3);
  CHECK(p["plan"][0][0] == json::array({1, 0}));
  CHECK(p["plan"][1].back() == json::array({1, 2}));

  const GridInstance pocket = fixture("pocket");
  const json t = report_to_json(pocket, classify_solvability(pocket));
  CHECK(t["class"] == "TP_SOLVABLE_ONLY");
  CHECK_FALSE(t.contains("order"));
  CHECK(t["schedule"][0] == json::array({1, 2}));
  CHECK(t["schedule"][2] == json::array({2, 1}));

  const GridInstance corridor = fixture("corridor");
  const json u = report_to_json(corridor, classify_solvability(corridor));
  CHECK(u["class"] == "PP_UNSOLVABLE");
  CHECK_FALSE(u.contains("order"));
  CHECK_FALSE(u.contains("schedule"));
  CHECK_FALSE(u.contains("plan"));
}

TEST_CASE("fixture files load through the path based entry point") {
  CHECK_THROWS_AS(load_instance("/nonexistent.map", "/nonexistent.json"),
                  std::invalid_argument);
  const GridInstance inst = fixture("cross");
  CHECK(inst.map.height() == 4);
  CHECK(inst.n_agents() == 3);
  CHECK(inst.time_limit == 8);
}
