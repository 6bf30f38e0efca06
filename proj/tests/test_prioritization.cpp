#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpp/graph.hpp"
#include "mpp/prioritization.hpp"
#include "mpp/rng.hpp"

using namespace mpp;

TEST_CASE("priorities from a computation sequence") {
  // Sequence ({1},{2,3},{4}) over four agents: class position Z gives
  // agent i the priority Z*4 + i.
  const ComputationSequence seq{{1}, {2, 3}, {4}};
  const Prioritization p = priorities_from_sequence(seq, 4);
  CHECK(p.of(1) == 5);
  CHECK(p.of(2) == 10);
  CHECK(p.of(3) == 11);
  CHECK(p.of(4) == 16);
}

TEST_CASE("sequence round trip: orient, classify, re-derive") {
  UndirectedCouplingGraph g(4);
  g.add_edge(1, 2);
  g.add_edge(1, 3);
  g.add_edge(2, 4);
  g.add_edge(3, 4);
  const ComputationSequence seq{{1}, {2, 3}, {4}};
  const Prioritization p = priorities_from_sequence(seq, 4);
  const auto classes = find_agent_classes(orient(g, p));
  REQUIRE(classes.has_value());
  CHECK(*classes == seq);
  // A second round trip is stable.
  CHECK(priorities_from_sequence(*classes, 4) == p);
}

TEST_CASE("sequence must partition the agents") {
  CHECK_THROWS_AS(priorities_from_sequence({{1}, {1, 2}}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(priorities_from_sequence({{1}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(priorities_from_sequence({{1}, {5}}, 2),
                  std::invalid_argument);
}

TEST_CASE("constant priorities equal the agent ids") {
  const Prioritization p = p_constant(4);
  for (int i = 1; i <= 4; ++i) CHECK(p.of(i) == i);
  CHECK_THROWS_AS(p.of(5), std::invalid_argument);
  CHECK_THROWS_AS(p.of(0), std::invalid_argument);
}

TEST_CASE("random priorities are a permutation and repeatable") {
  const Prioritization a = p_random(6, 17);
  const Prioritization b = p_random(6, 17);
  CHECK(a == b);
  std::vector<int> sorted = a.values();
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{1, 2, 3, 4, 5, 6});
  bool any_diff = false;
  for (std::uint64_t k = 0; k < 10 && !any_diff; ++k)
    any_diff = !(p_random(6, k) == a);
  CHECK(any_diff);
}

TEST_CASE("constraint priorities follow descending degree") {
  // Star around agent 2 plus a pendant at 4: degrees 1,3,1,2,1.
  UndirectedCouplingGraph g(5);
  g.add_edge(2, 1);
  g.add_edge(2, 3);
  g.add_edge(2, 4);
  g.add_edge(4, 5);
  const Prioritization p = p_constraint(g);
  CHECK(p.of(2) == 1);
  CHECK(p.of(4) == 2);
  // Ties in degree resolve by ascending id.
  CHECK(p.of(1) == 3);
  CHECK(p.of(3) == 4);
  CHECK(p.of(5) == 5);
}

TEST_CASE("coloring priorities group independent agents") {
  // Path 1-2-3: agents 1 and 3 share a color and end up in one class.
  UndirectedCouplingGraph g(3);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  const Prioritization p = p_color(g);
  CHECK(p.of(1) == 4);
  CHECK(p.of(2) == 8);
  CHECK(p.of(3) == 6);
  const auto classes = find_agent_classes(orient(g, p));
  REQUIRE(classes.has_value());
  CHECK(*classes == ComputationSequence{{1, 3}, {2}});
}

TEST_CASE("every strategy yields a valid prioritization") {
  SplitMix64 rng(40);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    UndirectedCouplingGraph g(n);
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (rng.uniform01() < 0.5) g.add_edge(i, j);
    for (const Prioritization& p :
         {p_constant(n), p_random(n, trial), p_constraint(g), p_color(g)}) {
      CHECK(is_valid_prioritization(g, p));
      CHECK(find_agent_classes(orient(g, p)).has_value());
    }
    // Coloring never uses more classes than the constant assignment.
    const auto by_color = find_agent_classes(orient(g, p_color(g)));
    const auto by_id = find_agent_classes(orient(g, p_constant(n)));
    CHECK(by_color->size() <= by_id->size());
  }
}
