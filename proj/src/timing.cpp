#include "mpp/timing.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace mpp {

int ComputationGraph::add_vertex(double weight) {
  weights_.push_back(weight);
  out_.emplace_back();
  in_degree_.push_back(0);
  return n_vertices() - 1;
}

void ComputationGraph::add_arc(int from, int to) {
  if (from < 0 || from >= n_vertices() || to < 0 || to >= n_vertices())
    throw std::invalid_argument("computation graph vertex out of range");
  out_[from].push_back(to);
  ++in_degree_[to];
}

double ComputationGraph::longest_path() const {
  const int n = n_vertices();
  std::vector<int> in_deg = in_degree_;
  std::vector<double> dp(n, 0.0);  // heaviest chain ending before vertex v
  std::deque<int> ready;
  for (int v = 0; v < n; ++v)
    if (in_deg[v] == 0) ready.push_back(v);
  int processed = 0;
  double best = 0.0;
  while (!ready.empty()) {
    const int v = ready.front();
    ready.pop_front();
    ++processed;
    const double finish = dp[v] + weights_[v];
    best = std::max(best, finish);
    for (int w : out_[v]) {
      dp[w] = std::max(dp[w], finish);
      if (--in_deg[w] == 0) ready.push_back(w);
    }
  }
  if (processed != n) throw std::logic_error("computation graph has a cycle");
  return best;
}

double networked_time_single(const DirectedCouplingGraph& dag,
                             const std::vector<double>& agent_times) {
  const int n = dag.n_agents();
  if (static_cast<int>(agent_times.size()) != n)
    throw std::invalid_argument("need one solve time per agent");
  ComputationGraph cg;
  for (int i = 0; i < n; ++i) cg.add_vertex(agent_times[i]);
  for (const auto& [from, to] : dag.arcs()) cg.add_arc(from - 1, to - 1);
  return cg.longest_path();
}

double networked_time_explore(const UndirectedCouplingGraph& g,
                              const ComputationSequence& initial,
                              const ScheduleMatrix& m,
                              const std::vector<std::vector<double>>& times) {
  const int n_rows = m.order();
  const int n = g.n_agents();
  if (n_rows < 1)
    throw std::invalid_argument("schedule needs at least one row");
  const int n_classes = static_cast<int>(m.rows[0].size());
  if (static_cast<int>(initial.size()) != n_classes)
    throw std::invalid_argument("sequence length must match schedule width");
  if (static_cast<int>(times.size()) != n_rows)
    throw std::invalid_argument("need solve times for every row");

  ComputationGraph cg;
  const auto vertex = [&](AgentId i, int row) { return row * n + (i - 1); };
  for (int row = 0; row < n_rows; ++row) {
    if (static_cast<int>(times[row].size()) != n)
      throw std::invalid_argument("need one solve time per agent and row");
    for (AgentId i = 1; i <= n; ++i) cg.add_vertex(times[row][i - 1]);
  }

  std::vector<int> class_of(n + 1, -1);
  for (int c = 0; c < n_classes; ++c)
    for (AgentId i : initial[c]) class_of[i] = c;

  for (int row = 0; row < n_rows; ++row) {
    // Coupling arcs inside the row: orientation induced by the row's
    // class order.
    ComputationSequence seq_row;
    for (int slot = 0; slot < n_classes; ++slot)
      seq_row.push_back(initial[m.rows[row][slot]]);
    const DirectedCouplingGraph dag =
        orient(g, priorities_from_sequence(seq_row, n));
    for (const auto& [from, to] : dag.arcs())
      cg.add_arc(vertex(from, row), vertex(to, row));
  }

  // Each agent works through its solves one at a time, ordered by slot.
  // For a full Latin square every slot appears exactly once per agent; a
  // truncated row subset may repeat slots, broken by row index.
  for (AgentId i = 1; i <= n; ++i) {
    std::vector<std::pair<int, int>> slots;  // (slot, row)
    for (int row = 0; row < n_rows; ++row) {
      const auto& r = m.rows[row];
      const int slot = static_cast<int>(
          std::find(r.begin(), r.end(), class_of[i]) - r.begin());
      slots.push_back({slot, row});
    }
    std::sort(slots.begin(), slots.end());
    for (std::size_t s = 0; s + 1 < slots.size(); ++s)
      cg.add_arc(vertex(i, slots[s].second), vertex(i, slots[s + 1].second));
  }
  return cg.longest_path();
}

}  // namespace mpp
