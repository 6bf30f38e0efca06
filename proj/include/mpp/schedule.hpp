#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "mpp/graph.hpp"

namespace mpp {

/// Square matrix of agent-class indices (0-based, referencing a fixed
/// ComputationSequence). Row q is one computation sequence, column m one
/// computation slot; a complete matrix is a Latin square, so every class
/// computes exactly once per slot and once per sequence.
struct ScheduleMatrix {
  std::vector<std::vector<int>> rows;

  int order() const { return static_cast<int>(rows.size()); }
  bool operator==(const ScheduleMatrix&) const = default;
};

/// Builds an n_classes x n_classes schedule. Row 0 is the identity (the
/// initial sequence); later rows are filled most-constrained-column first
/// with a generator seeded only by time_step, so all agents construct the
/// same matrix independently. Dead-end rows are cleared and retried;
/// restarts_out (optional) receives the retry count.
ScheduleMatrix build_schedule(int n_classes, std::uint64_t time_step,
                              int* restarts_out = nullptr);

/// True iff m is a Latin square over 0..order-1.
bool validate_schedule(const ScheduleMatrix& m);

/// Row index q with m.rows[q][slot] == cls. Valid Latin input has exactly
/// one; a violated invariant raises std::logic_error.
int row_for_slot(const ScheduleMatrix& m, int cls, int slot);

/// A schedule matrix up to row reordering: its set of rows, sorted.
using ScheduleSet = std::vector<std::vector<int>>;

/// One representative per distinct row-set over all Latin squares of the
/// given order. Exhaustive; guard n_classes <= 5 -> CapacityError.
std::vector<ScheduleSet> unique_schedule_sets(int n_classes);

struct ScheduleGraph {
  std::vector<ScheduleSet> sets;      // vertex v holds sets[v]
  UndirectedCouplingGraph adjacency;  // edge iff two sets share >= 1 row
};

/// Graph over unique schedule sets; an edge means a run can move between
/// the two matrices while retaining one computation sequence.
ScheduleGraph schedule_graph(int n_classes);

void to_json(nlohmann::json& j, const ScheduleMatrix& m);
void from_json(const nlohmann::json& j, ScheduleMatrix& m);

}  // namespace mpp
