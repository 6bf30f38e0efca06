#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mpp/prioritization.hpp"

namespace mpp {

/// Coupling graph over agents 1..n. Undirected, no self loops. An edge
/// {i,j} means the agents' plans may interact and one of them has to treat
/// the other as a constraint.
class UndirectedCouplingGraph {
 public:
  UndirectedCouplingGraph() = default;
  explicit UndirectedCouplingGraph(int n_agents);

  int n_agents() const { return n_agents_; }
  /// Adds {i,j}. Self loops and out-of-range ids -> std::invalid_argument.
  void add_edge(AgentId i, AgentId j);
  bool has_edge(AgentId i, AgentId j) const;
  int degree(AgentId i) const;
  std::vector<AgentId> neighbors(AgentId i) const;

  /// Edges with first < second, ascending.
  const std::set<std::pair<AgentId, AgentId>>& edges() const { return edges_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  bool operator==(const UndirectedCouplingGraph&) const = default;

 private:
  void check_agent(AgentId i) const;

  int n_agents_ = 0;
  std::set<std::pair<AgentId, AgentId>> edges_;
};

/// Orientation of a coupling graph: arc i->j means i computes before j and
/// j receives i's trajectory. Only acyclic instances are meaningful; cycle
/// detection is left to find_agent_classes so that invalid orientations can
/// be represented and rejected.
class DirectedCouplingGraph {
 public:
  DirectedCouplingGraph() = default;
  explicit DirectedCouplingGraph(int n_agents);

  int n_agents() const { return n_agents_; }
  void add_arc(AgentId from, AgentId to);
  bool has_arc(AgentId from, AgentId to) const;

  const std::set<std::pair<AgentId, AgentId>>& arcs() const { return arcs_; }
  int in_degree(AgentId i) const;

  bool operator==(const DirectedCouplingGraph&) const = default;

 private:
  void check_agent(AgentId i) const;

  int n_agents_ = 0;
  std::set<std::pair<AgentId, AgentId>> arcs_;
};

/// Agents that must deliver their trajectory to i before i can plan.
std::vector<AgentId> predecessors(const DirectedCouplingGraph& g, AgentId i);
std::vector<AgentId> successors(const DirectedCouplingGraph& g, AgentId i);

/// True iff every edge of g connects agents with distinct priorities and
/// p covers all agents of g.
bool is_valid_prioritization(const UndirectedCouplingGraph& g,
                             const Prioritization& p);

/// Directs every edge {i,j} as i->j iff p(i) < p(j). Requires a valid
/// prioritization (std::invalid_argument otherwise); the result is acyclic
/// because priorities are totally ordered.
DirectedCouplingGraph orient(const UndirectedCouplingGraph& g,
                             const Prioritization& p);

/// Iteratively peels source vertices into classes. Agents in one class have
/// no arcs between each other and may compute in parallel; the class count
/// equals 1 + length of the longest directed path. Returns nullopt when the
/// input contains a cycle.
std::optional<ComputationSequence> find_agent_classes(
    const DirectedCouplingGraph& g);

/// All acyclic orientations of g, duplicate-free. The edgeless graph has
/// exactly one (empty) orientation. Guard: n_edges <= 20 -> CapacityError.
std::vector<DirectedCouplingGraph> enumerate_acyclic_orientations(
    const UndirectedCouplingGraph& g);

/// Upper bound prod_i (degree(i) + 1) on the number of acyclic orientations.
std::uint64_t orientation_count_bound(const UndirectedCouplingGraph& g);

void to_json(nlohmann::json& j, const UndirectedCouplingGraph& g);
void from_json(const nlohmann::json& j, UndirectedCouplingGraph& g);

}  // namespace mpp
