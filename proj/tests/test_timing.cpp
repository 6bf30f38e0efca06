#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "mpp/prioritization.hpp"
#include "mpp/rng.hpp"
#include "mpp/timing.hpp"
#include "oracles.hpp"

using namespace mpp;

TEST_CASE("longest path accumulates vertex weights") {
  ComputationGraph g;
  CHECK(g.longest_path() == 0.0);
  const int a = g.add_vertex(1.0);
  CHECK(g.longest_path() == 1.0);
  const int b = g.add_vertex(2.0);
  const int c = g.add_vertex(3.0);
  CHECK(g.longest_path() == 3.0);  // disconnected vertices run in parallel
  g.add_arc(a, b);
  g.add_arc(b, c);
  CHECK(g.longest_path() == 6.0);
  CHECK_THROWS_AS(g.add_arc(a, 7), std::invalid_argument);
}

TEST_CASE("cycles are rejected") {
  ComputationGraph g;
  const int a = g.add_vertex(1.0);
  const int b = g.add_vertex(1.0);
  g.add_arc(a, b);
  g.add_arc(b, a);
  CHECK_THROWS_AS(g.longest_path(), std::logic_error);
}

TEST_CASE("longest path matches brute force on random DAGs") {
  SplitMix64 rng(0x74696d65ull);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    std::vector<double> weights(n);
    ComputationGraph g;
    for (int v = 0; v < n; ++v) {
      weights[v] = 0.1 + 0.001 * static_cast<double>(rng.below(1000));
      g.add_vertex(weights[v]);
    }
    std::vector<std::vector<int>> out(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.below(2)) {
          g.add_arc(u, v);  // forward arcs only, acyclic by construction
          out[u].push_back(v);
        }
    std::vector<double> memo(n, -1.0);
    const auto heaviest = [&](auto&& self, int v) -> double {
      if (memo[v] >= 0.0) return memo[v];
      double tail = 0.0;
      for (int w : out[v]) tail = std::max(tail, self(self, w));
      return memo[v] = weights[v] + tail;
    };
    double expected = 0.0;
    for (int v = 0; v < n; ++v)
      expected = std::max(expected, heaviest(heaviest, v));
    CHECK(g.longest_path() == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("networked time of one prioritized computation") {
  // Chain 1 -> 2 -> 3: all agents are serialized.
  DirectedCouplingGraph chain(3);
  chain.add_arc(1, 2);
  chain.add_arc(2, 3);
  CHECK(networked_time_single(chain, {1.0, 2.0, 3.0}) == 6.0);

  // No couplings: everything runs in parallel.
  DirectedCouplingGraph loose(2);
  CHECK(networked_time_single(loose, {2.0, 3.0}) == 3.0);

  // Diamond: 1 -> {2,3} -> 4, the slower middle agent dominates.
  DirectedCouplingGraph diamond(4);
  diamond.add_arc(1, 2);
  diamond.add_arc(1, 3);
  diamond.add_arc(2, 4);
  diamond.add_arc(3, 4);
  CHECK(networked_time_single(diamond, {1.0, 2.0, 3.0, 4.0}) == 8.0);

  CHECK_THROWS_AS(networked_time_single(chain, {1.0, 2.0}),
                  std::invalid_argument);
}

TEST_CASE("explore timing on the two-agent chain") {
  UndirectedCouplingGraph g(2);
  g.add_edge(1, 2);
  const ComputationSequence initial = {{1}, {2}};
  const ScheduleMatrix m = build_schedule(2, 0);
  REQUIRE(m.rows == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
  // Row 0 runs agent 1 before 2, row 1 the reverse; agent 1's two solves
  // are serialized, so the heaviest chain is 1.0 then 4.0.
  const double t =
      networked_time_explore(g, initial, m, {{1.0, 2.0}, {4.0, 0.5}});
  CHECK(t == doctest::Approx(5.0));
}

TEST_CASE("equal solve times make exploration overhead-free") {
  SplitMix64 rng(0xfeedull);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    UndirectedCouplingGraph g(n);
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b)
        if (rng.below(2)) g.add_edge(a, b);
    const Prioritization p = p_constant(n);
    const auto classes = find_agent_classes(orient(g, p));
    REQUIRE(classes.has_value());
    const int n_rows = static_cast<int>(classes->size());
    const ScheduleMatrix m = build_schedule(n_rows, trial);

    const double solve = 0.7;
    const std::vector<std::vector<double>> times(
        n_rows, std::vector<double>(n, solve));
    const double explore = networked_time_explore(g, *classes, m, times);
    // One row alone costs (number of classes) * solve; running all rows
    // concurrently costs exactly the same.
    const double single =
        networked_time_single(orient(g, p), std::vector<double>(n, solve));
    CHECK(single == doctest::Approx(n_rows * solve).epsilon(1e-12));
    CHECK(explore == doctest::Approx(n_rows * solve).epsilon(1e-12));
  }
}

TEST_CASE("explore time bounds against per-row computations") {
  SplitMix64 rng(0xabcdull);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    UndirectedCouplingGraph g(n);
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b)
        if (rng.below(2)) g.add_edge(a, b);
    const auto classes = find_agent_classes(orient(g, p_constant(n)));
    REQUIRE(classes.has_value());
    const int n_rows = static_cast<int>(classes->size());
    const ScheduleMatrix m = build_schedule(n_rows, 100 + trial);

    std::vector<std::vector<double>> times(n_rows, std::vector<double>(n));
    for (auto& row : times)
      for (double& v : row) v = 0.5 + rng.uniform01();

    const double explore = networked_time_explore(g, *classes, m, times);

    std::vector<int> class_of(n + 1, -1);
    for (int c = 0; c < n_rows; ++c)
      for (AgentId i : (*classes)[c]) class_of[i] = c;

    // Every row's own computation embeds into the explore graph.
    double max_single = 0.0;
    for (int row = 0; row < n_rows; ++row) {
      ComputationSequence seq_row;
      for (int slot = 0; slot < n_rows; ++slot)
        seq_row.push_back((*classes)[m.rows[row][slot]]);
      const DirectedCouplingGraph dag =
          orient(g, priorities_from_sequence(seq_row, n));
      max_single =
          std::max(max_single, networked_time_single(dag, times[row]));
    }
    CHECK(explore >= max_single - 1e-12);

    // Any chain visits at most one solve per slot.
    double slot_sum = 0.0;
    for (int slot = 0; slot < n_rows; ++slot) {
      double worst = 0.0;
      for (int row = 0; row < n_rows; ++row)
        for (AgentId i = 1; i <= n; ++i)
          if (m.rows[row][slot] == class_of[i])
            worst = std::max(worst, times[row][i - 1]);
      slot_sum += worst;
    }
    CHECK(explore <= slot_sum + 1e-12);
  }
}

TEST_CASE("explore timing validates its inputs") {
  UndirectedCouplingGraph g(2);
  g.add_edge(1, 2);
  const ScheduleMatrix m = build_schedule(2, 0);
  CHECK_THROWS_AS(networked_time_explore(g, {{1, 2}}, m, {{1.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      networked_time_explore(g, {{1}, {2}}, m, {{1.0, 1.0}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      networked_time_explore(g, {{1}, {2}}, m, {{1.0}, {1.0, 1.0}}),
      std::invalid_argument);
}
