#include "mpp/prioritization.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mpp/graph.hpp"
#include "mpp/rng.hpp"

namespace mpp {

Prioritization::Prioritization(std::vector<int> values)
    : values_(std::move(values)) {}

int Prioritization::of(AgentId i) const {
  if (i < 1 || i > n_agents())
    throw std::invalid_argument("no priority for agent " + std::to_string(i));
  return values_[i - 1];
}

Prioritization priorities_from_sequence(const ComputationSequence& seq,
                                        int n_agents) {
  std::vector<int> values(n_agents, 0);
  std::vector<bool> assigned(n_agents, false);
  int z = 1;
  for (const AgentClass& cls : seq) {
    for (AgentId i : cls) {
      if (i < 1 || i > n_agents)
        throw std::invalid_argument("sequence contains unknown agent " +
                                    std::to_string(i));
      if (assigned[i - 1])
        throw std::invalid_argument("agent " + std::to_string(i) +
                                    " appears twice in sequence");
      assigned[i - 1] = true;
      values[i - 1] = z * n_agents + i;
    }
    ++z;
  }
  if (!std::all_of(assigned.begin(), assigned.end(), [](bool b) { return b; }))
    throw std::invalid_argument("sequence does not cover all agents");
  return Prioritization(values);
}

Prioritization p_constant(int n_agents) {
  std::vector<int> values(n_agents);
  std::iota(values.begin(), values.end(), 1);
  return Prioritization(values);
}

Prioritization p_random(int n_agents, std::uint64_t time_step) {
  std::vector<int> values(n_agents);
  std::iota(values.begin(), values.end(), 1);
  SplitMix64 rng(mix_seed(0x7072696f, time_step));
  // Fisher-Yates with the shared generator; identical on every agent.
  for (int i = n_agents - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(values[i], values[j]);
  }
  return Prioritization(values);
}

Prioritization p_constraint(const UndirectedCouplingGraph& g) {
  const int n = g.n_agents();
  std::vector<AgentId> order(n);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](AgentId a, AgentId b) {
    if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
    return a < b;
  });
  std::vector<int> values(n);
  for (int rank = 0; rank < n; ++rank) values[order[rank] - 1] = rank + 1;
  return Prioritization(values);
}

Prioritization p_color(const UndirectedCouplingGraph& g) {
  const int n = g.n_agents();
  std::vector<int> color(n + 1, 0);
  for (AgentId i = 1; i <= n; ++i) {
    std::vector<bool> taken(n + 2, false);
    for (AgentId nb : g.neighbors(i))
      if (color[nb] > 0) taken[color[nb]] = true;
    int c = 1;
    while (taken[c]) ++c;
    color[i] = c;
  }
  std::vector<int> values(n);
  for (AgentId i = 1; i <= n; ++i) values[i - 1] = color[i] * n + i;
  return Prioritization(values);
}

}  // namespace mpp
