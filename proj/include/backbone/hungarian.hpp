#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace backbone {

struct Assignment {
  std::vector<int> column_of_row;
  std::int64_t cost = 0;
};

// Minimum-cost perfect matching on a square integer matrix (shortest
// augmenting paths with row/column potentials), O(k^3).
inline Assignment hungarian(const std::vector<std::vector<std::int64_t>>& cost) {
  const int k = static_cast<int>(cost.size());
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based internally; column 0 is a virtual start.
  std::vector<std::int64_t> u(static_cast<std::size_t>(k) + 1, 0), v(static_cast<std::size_t>(k) + 1, 0);
  std::vector<int> row_of_col(static_cast<std::size_t>(k) + 1, 0), way(static_cast<std::size_t>(k) + 1, 0);
  for (int i = 1; i <= k; ++i) {
    row_of_col[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(static_cast<std::size_t>(k) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(k) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = row_of_col[static_cast<std::size_t>(j0)];
      std::int64_t delta = inf;
      int j1 = 0;
      for (int j = 1; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        std::int64_t cur = cost[static_cast<std::size_t>(i0) - 1][static_cast<std::size_t>(j) - 1] - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      row_of_col[static_cast<std::size_t>(j0)] = row_of_col[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  Assignment out;
  out.column_of_row.assign(static_cast<std::size_t>(k), -1);
  for (int j = 1; j <= k; ++j) out.column_of_row[static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(j)]) - 1] = j - 1;
  for (int i = 0; i < k; ++i) out.cost += cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(out.column_of_row[static_cast<std::size_t>(i)])];
  return out;
}

}  // namespace backbone
