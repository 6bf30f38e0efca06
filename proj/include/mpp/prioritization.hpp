#pragma once

#include <cstdint>
#include <vector>

namespace mpp {

class UndirectedCouplingGraph;

/// Agents are numbered 1..n_agents.
using AgentId = int;

/// One agent class: agents that may compute in parallel. Kept sorted.
using AgentClass = std::vector<AgentId>;

/// Ordered partition of all agents into classes; position = computation slot.
using ComputationSequence = std::vector<AgentClass>;

/// Total priority assignment, lower value = higher priority. Dense over
/// agents 1..n; two agents never share a value by construction of the
/// factories below, which is what makes the assignment valid for every
/// coupling graph over the same agents.
class Prioritization {
 public:
  Prioritization() = default;
  explicit Prioritization(std::vector<int> values);

  int n_agents() const { return static_cast<int>(values_.size()); }
  /// Priority of agent i (1-based). Unknown agent -> std::invalid_argument.
  int of(AgentId i) const;

  const std::vector<int>& values() const { return values_; }
  bool operator==(const Prioritization&) const = default;

 private:
  std::vector<int> values_;  // values_[i-1] = priority of agent i
};

/// Priority of agent i in class Z (1-based class position) is Z*n_agents + i.
/// This reproduces the class structure of the sequence when the orientation
/// is rebuilt, and breaks ties inside a class by agent id.
/// seq must partition 1..n_agents exactly, else std::invalid_argument.
Prioritization priorities_from_sequence(const ComputationSequence& seq,
                                        int n_agents);

/// p(i) = i.
Prioritization p_constant(int n_agents);

/// Random permutation of 1..n_agents. Every caller passing the same
/// time_step obtains the same permutation, so distributed agents agree
/// without exchanging messages.
Prioritization p_random(int n_agents, std::uint64_t time_step);

/// Descending vertex degree, ties broken by ascending agent id.
Prioritization p_constraint(const UndirectedCouplingGraph& g);

/// Greedy vertex coloring in ascending id order; p(i) = color(i)*n + i,
/// so agents of one color form one agent class.
Prioritization p_color(const UndirectedCouplingGraph& g);

}  // namespace mpp
