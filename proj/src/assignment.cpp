#include "iamlearn/assignment.hpp"

#include <algorithm>
#include <limits>

#include "iamlearn/error.hpp"

namespace iamlearn {

AssignmentSolution solve_assignment(std::span<const std::int32_t> cost, std::size_t n) {
  if (cost.size() != n * n) throw Error(ErrorKind::DimensionMismatch, "cost matrix is not n x n");
  AssignmentSolution sol;
  if (n == 0) return sol;

  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based: row/column 0 is the virtual source.
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      const std::int32_t* row = cost.data() + (i0 - 1) * n;
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  sol.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    sol.row_to_col[match[j] - 1] = j - 1;
    sol.total_cost += cost[(match[j] - 1) * n + (j - 1)];
  }
  return sol;
}

}  // namespace iamlearn
