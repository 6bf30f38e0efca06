#include "mpp/schedule.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "mpp/error.hpp"
#include "mpp/rng.hpp"

namespace mpp {

ScheduleMatrix build_schedule(int n_classes, std::uint64_t time_step,
                              int* restarts_out) {
  if (n_classes < 1) throw std::invalid_argument("need at least one class");
  const int n = n_classes;
  ScheduleMatrix m;
  m.rows.assign(1, std::vector<int>(n));
  std::iota(m.rows[0].begin(), m.rows[0].end(), 0);

  SplitMix64 rng(mix_seed(0x7363686564ull, time_step));
  int restarts = 0;

  for (int q = 1; q < n; ++q) {
    std::vector<int> row(n, -1);
    std::vector<bool> in_row(n, false);
    int filled = 0;
    while (filled < n) {
      // Candidate classes per unfilled column: not yet in this row and not
      // in the column's previous rows. The column with the fewest options
      // is fixed next (ties: lowest column index).
      int best_col = -1;
      std::vector<int> best_options;
      for (int col = 0; col < n; ++col) {
        if (row[col] != -1) continue;
        std::vector<bool> in_col(n, false);
        for (int r = 0; r < q; ++r) in_col[m.rows[r][col]] = true;
        std::vector<int> options;
        for (int c = 0; c < n; ++c)
          if (!in_row[c] && !in_col[c]) options.push_back(c);
        if (best_col == -1 || options.size() < best_options.size()) {
          best_col = col;
          best_options = std::move(options);
        }
      }
      if (best_options.empty()) {
        // Dead end: no class fits the most constrained column. Clear the
        // row and try again with the next draws of the shared generator.
        std::fill(row.begin(), row.end(), -1);
        std::fill(in_row.begin(), in_row.end(), false);
        filled = 0;
        ++restarts;
        continue;
      }
      const int pick =
          best_options[rng.below(static_cast<std::uint64_t>(best_options.size()))];
      row[best_col] = pick;
      in_row[pick] = true;
      ++filled;
    }
    m.rows.push_back(std::move(row));
  }
  if (restarts_out) *restarts_out = restarts;
  return m;
}

bool validate_schedule(const ScheduleMatrix& m) {
  const int n = m.order();
  if (n == 0) return false;
  for (const auto& row : m.rows)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("schedule matrix is not square");
  for (int q = 0; q < n; ++q) {
    std::vector<bool> seen(n, false);
    for (int col = 0; col < n; ++col) {
      const int c = m.rows[q][col];
      if (c < 0 || c >= n || seen[c]) return false;
      seen[c] = true;
    }
  }
  for (int col = 0; col < n; ++col) {
    std::vector<bool> seen(n, false);
    for (int q = 0; q < n; ++q) {
      const int c = m.rows[q][col];
      if (c < 0 || c >= n || seen[c]) return false;
      seen[c] = true;
    }
  }
  return true;
}

int row_for_slot(const ScheduleMatrix& m, int cls, int slot) {
  const int n = m.order();
  if (cls < 0 || cls >= n) throw std::invalid_argument("class index out of range");
  if (slot < 0 || slot >= n) throw std::invalid_argument("slot index out of range");
  int found = -1;
  for (int q = 0; q < n; ++q) {
    if (m.rows[q][slot] == cls) {
      if (found != -1)
        throw std::logic_error("schedule has class twice in one slot");
      found = q;
    }
  }
  if (found == -1)
    throw std::logic_error("schedule misses class " + std::to_string(cls) +
                           " in slot " + std::to_string(slot));
  return found;
}

namespace {

void enumerate_latin(int n, std::vector<std::vector<int>>& rows,
                     std::vector<std::vector<bool>>& col_used,
                     const std::function<void(const std::vector<std::vector<int>>&)>& emit) {
  if (static_cast<int>(rows.size()) == n) {
    emit(rows);
    return;
  }
  std::vector<int> row(n, -1);
  std::vector<bool> in_row(n, false);
  auto fill = [&](auto&& self, int col) -> void {
    if (col == n) {
      rows.push_back(row);
      for (int c2 = 0; c2 < n; ++c2) col_used[c2][row[c2]] = true;
      enumerate_latin(n, rows, col_used, emit);
      for (int c2 = 0; c2 < n; ++c2) col_used[c2][row[c2]] = false;
      rows.pop_back();
      return;
    }
    for (int c = 0; c < n; ++c) {
      if (in_row[c] || col_used[col][c]) continue;
      row[col] = c;
      in_row[c] = true;
      self(self, col + 1);
      in_row[c] = false;
    }
    row[col] = -1;
  };
  fill(fill, 0);
}

}  // namespace

std::vector<ScheduleSet> unique_schedule_sets(int n_classes) {
  if (n_classes < 1) throw std::invalid_argument("need at least one class");
  if (n_classes > 5)
    throw CapacityError("Latin square enumeration limited to order 5, got " +
                        std::to_string(n_classes));
  const int n = n_classes;
  std::set<ScheduleSet> sets;
  std::vector<std::vector<int>> rows;
  std::vector<std::vector<bool>> col_used(n, std::vector<bool>(n, false));
  enumerate_latin(n, rows, col_used,
                  [&](const std::vector<std::vector<int>>& square) {
                    ScheduleSet s = square;
                    std::sort(s.begin(), s.end());
                    sets.insert(std::move(s));
                  });
  return {sets.begin(), sets.end()};
}

ScheduleGraph schedule_graph(int n_classes) {
  ScheduleGraph g;
  g.sets = unique_schedule_sets(n_classes);
  const int n = static_cast<int>(g.sets.size());
  g.adjacency = UndirectedCouplingGraph(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      // Both row lists are sorted; a single merge pass finds shared rows.
      const auto& ra = g.sets[a];
      const auto& rb = g.sets[b];
      std::size_t ia = 0, ib = 0;
      bool share = false;
      while (ia < ra.size() && ib < rb.size()) {
        if (ra[ia] == rb[ib]) {
          share = true;
          break;
        }
        if (ra[ia] < rb[ib])
          ++ia;
        else
          ++ib;
      }
      if (share) g.adjacency.add_edge(a + 1, b + 1);
    }
  }
  return g;
}

void to_json(nlohmann::json& j, const ScheduleMatrix& m) {
  j = nlohmann::json{{"rows", m.rows}};
}

void from_json(const nlohmann::json& j, ScheduleMatrix& m) {
  m.rows = j.at("rows").get<std::vector<std::vector<int>>>();
}

}  // namespace mpp
