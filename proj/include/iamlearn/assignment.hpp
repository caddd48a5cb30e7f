#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace iamlearn {

struct AssignmentSolution {
  std::int64_t total_cost = 0;
  std::vector<std::size_t> row_to_col;
};

/// Exact minimum-cost perfect matching on a square n x n integer cost matrix
/// (row-major), by shortest augmenting paths with vertex potentials.
/// O(n^3) time, O(n) extra space.
AssignmentSolution solve_assignment(std::span<const std::int32_t> cost,
                                    std::size_t n);

}  // namespace iamlearn
