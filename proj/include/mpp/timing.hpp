#pragma once

#include <vector>

#include "mpp/graph.hpp"
#include "mpp/schedule.hpp"

namespace mpp {

/// DAG whose vertices carry the solve time of one planning problem. The
/// networked computation time is the heaviest chain of vertex weights: an
/// arc u->v costs the weight of u (a successor can only start after its
/// predecessor finished), virtual source/sink cost nothing.
class ComputationGraph {
 public:
  int add_vertex(double weight);
  void add_arc(int from, int to);

  /// Maximum vertex-weight sum over all directed paths. Empty graph -> 0.
  /// Cycles -> std::logic_error.
  double longest_path() const;

  int n_vertices() const { return static_cast<int>(weights_.size()); }

 private:
  std::vector<double> weights_;
  std::vector<std::vector<int>> out_;
  std::vector<int> in_degree_;
};

/// Networked time of one prioritized computation: agents chained along the
/// coupling arcs, uncoupled agents run in parallel.
double networked_time_single(const DirectedCouplingGraph& dag,
                             const std::vector<double>& agent_times);

/// Networked time when all rows of a schedule run simultaneously: one
/// vertex per (agent, row), coupling arcs inside each row, and arcs that
/// serialize the slots each agent works through. times[row][agent-1] is
/// the solve time of that agent's problem for that row. m may hold a
/// leading subset of a full schedule's rows (class-cap execution).
double networked_time_explore(const UndirectedCouplingGraph& g,
                              const ComputationSequence& initial,
                              const ScheduleMatrix& m,
                              const std::vector<std::vector<double>>& times);

}  // namespace mpp
