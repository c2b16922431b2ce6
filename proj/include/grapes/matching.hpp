#pragma once

#include <optional>
#include <vector>

namespace grapes {

// marker for edges that must not be used
constexpr long long kForbiddenEdge = 1LL << 40;

struct MatchingResult {
    long long total = 0;
    std::vector<int> col_of_row;  // column matched to each row
};

// Exact min-cost assignment of every row to a distinct column (rows <=
// columns) via the Hungarian algorithm with potentials. Returns nullopt when
// no assignment avoids forbidden edges.
std::optional<MatchingResult> min_cost_assignment(
    const std::vector<std::vector<long long>>& cost);

}  // namespace grapes
