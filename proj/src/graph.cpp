#include "mpp/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mpp/error.hpp"

namespace mpp {

UndirectedCouplingGraph::UndirectedCouplingGraph(int n_agents)
    : n_agents_(n_agents) {
  if (n_agents < 0) throw std::invalid_argument("negative agent count");
}

void UndirectedCouplingGraph::check_agent(AgentId i) const {
  if (i < 1 || i > n_agents_)
    throw std::invalid_argument("agent id " + std::to_string(i) +
                                " out of range 1.." + std::to_string(n_agents_));
}

void UndirectedCouplingGraph::add_edge(AgentId i, AgentId j) {
  check_agent(i);
  check_agent(j);
  if (i == j) throw std::invalid_argument("self loop on agent " + std::to_string(i));
  edges_.insert({std::min(i, j), std::max(i, j)});
}

bool UndirectedCouplingGraph::has_edge(AgentId i, AgentId j) const {
  check_agent(i);
  check_agent(j);
  return edges_.count({std::min(i, j), std::max(i, j)}) > 0;
}

int UndirectedCouplingGraph::degree(AgentId i) const {
  check_agent(i);
  int d = 0;
  for (const auto& [a, b] : edges_)
    if (a == i || b == i) ++d;
  return d;
}

std::vector<AgentId> UndirectedCouplingGraph::neighbors(AgentId i) const {
  check_agent(i);
  std::vector<AgentId> out;
  for (const auto& [a, b] : edges_) {
    if (a == i) out.push_back(b);
    if (b == i) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

DirectedCouplingGraph::DirectedCouplingGraph(int n_agents)
    : n_agents_(n_agents) {
  if (n_agents < 0) throw std::invalid_argument("negative agent count");
}

void DirectedCouplingGraph::check_agent(AgentId i) const {
  if (i < 1 || i > n_agents_)
    throw std::invalid_argument("agent id " + std::to_string(i) +
                                " out of range 1.." + std::to_string(n_agents_));
}

void DirectedCouplingGraph::add_arc(AgentId from, AgentId to) {
  check_agent(from);
  check_agent(to);
  if (from == to) throw std::invalid_argument("self loop on agent " + std::to_string(from));
  arcs_.insert({from, to});
}

bool DirectedCouplingGraph::has_arc(AgentId from, AgentId to) const {
  check_agent(from);
  check_agent(to);
  return arcs_.count({from, to}) > 0;
}

int DirectedCouplingGraph::in_degree(AgentId i) const {
  check_agent(i);
  int d = 0;
  for (const auto& [from, to] : arcs_) {
    (void)from;
    if (to == i) ++d;
  }
  return d;
}

std::vector<AgentId> predecessors(const DirectedCouplingGraph& g, AgentId i) {
  if (i < 1 || i > g.n_agents())
    throw std::invalid_argument("unknown agent " + std::to_string(i));
  std::vector<AgentId> out;
  for (const auto& [from, to] : g.arcs())
    if (to == i) out.push_back(from);
  return out;
}

std::vector<AgentId> successors(const DirectedCouplingGraph& g, AgentId i) {
  if (i < 1 || i > g.n_agents())
    throw std::invalid_argument("unknown agent " + std::to_string(i));
  std::vector<AgentId> out;
  for (const auto& [from, to] : g.arcs())
    if (from == i) out.push_back(to);
  return out;
}

bool is_valid_prioritization(const UndirectedCouplingGraph& g,
                             const Prioritization& p) {
  if (p.n_agents() < g.n_agents()) return false;
  for (const auto& [i, j] : g.edges())
    if (p.of(i) == p.of(j)) return false;
  return true;
}

DirectedCouplingGraph orient(const UndirectedCouplingGraph& g,
                             const Prioritization& p) {
  if (!is_valid_prioritization(g, p))
    throw std::invalid_argument("prioritization not valid for this graph");
  DirectedCouplingGraph d(g.n_agents());
  for (const auto& [i, j] : g.edges()) {
    if (p.of(i) < p.of(j))
      d.add_arc(i, j);
    else
      d.add_arc(j, i);
  }
  return d;
}

std::optional<ComputationSequence> find_agent_classes(
    const DirectedCouplingGraph& g) {
  const int n = g.n_agents();
  std::vector<int> in_deg(n + 1, 0);
  for (const auto& [from, to] : g.arcs()) {
    (void)from;
    ++in_deg[to];
  }
  std::vector<bool> removed(n + 1, false);
  int remaining = n;
  ComputationSequence seq;
  while (remaining > 0) {
    AgentClass cls;
    for (AgentId i = 1; i <= n; ++i)
      if (!removed[i] && in_deg[i] == 0) cls.push_back(i);
    if (cls.empty()) return std::nullopt;  // cycle: no source vertex left
    for (AgentId i : cls) removed[i] = true;
    for (AgentId i : cls)
      for (const auto& [from, to] : g.arcs())
        if (from == i && !removed[to]) --in_deg[to];
    remaining -= static_cast<int>(cls.size());
    seq.push_back(std::move(cls));
  }
  return seq;
}

namespace {

// True iff `to` can already reach `from` (adding from->to would close a cycle).
bool reaches(const std::vector<std::vector<AgentId>>& adj, AgentId src,
             AgentId dst, std::vector<char>& seen) {
  if (src == dst) return true;
  seen[src] = 1;
  for (AgentId next : adj[src])
    if (!seen[next] && reaches(adj, next, dst, seen)) return true;
  return false;
}

}  // namespace

std::vector<DirectedCouplingGraph> enumerate_acyclic_orientations(
    const UndirectedCouplingGraph& g) {
  if (g.n_edges() > 20)
    throw CapacityError("orientation enumeration limited to 20 edges, got " +
                        std::to_string(g.n_edges()));
  std::vector<std::pair<AgentId, AgentId>> edges(g.edges().begin(),
                                                 g.edges().end());
  std::vector<DirectedCouplingGraph> out;
  std::vector<std::vector<AgentId>> adj(g.n_agents() + 1);
  std::vector<std::pair<AgentId, AgentId>> chosen;

  auto recurse = [&](auto&& self, std::size_t idx) -> void {
    if (idx == edges.size()) {
      DirectedCouplingGraph d(g.n_agents());
      for (const auto& [from, to] : chosen) d.add_arc(from, to);
      out.push_back(std::move(d));
      return;
    }
    const auto [i, j] = edges[idx];
    for (const auto& [from, to] : {std::pair{i, j}, std::pair{j, i}}) {
      std::vector<char> seen(g.n_agents() + 1, 0);
      if (reaches(adj, to, from, seen)) continue;  // would close a cycle
      adj[from].push_back(to);
      chosen.push_back({from, to});
      self(self, idx + 1);
      chosen.pop_back();
      adj[from].pop_back();
    }
  };
  recurse(recurse, 0);
  return out;
}

std::uint64_t orientation_count_bound(const UndirectedCouplingGraph& g) {
  std::uint64_t bound = 1;
  for (AgentId i = 1; i <= g.n_agents(); ++i)
    bound *= static_cast<std::uint64_t>(g.degree(i)) + 1;
  return bound;
}

void to_json(nlohmann::json& j, const UndirectedCouplingGraph& g) {
  j = nlohmann::json{{"n_agents", g.n_agents()},
                     {"edges", nlohmann::json::array()}};
  for (const auto& [a, b] : g.edges()) j["edges"].push_back({a, b});
}

void from_json(const nlohmann::json& j, UndirectedCouplingGraph& g) {
  g = UndirectedCouplingGraph(j.at("n_agents").get<int>());
  for (const auto& e : j.at("edges"))
    g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
}

}  // namespace mpp
