#include "grapes/matching.hpp"

#include <limits>

namespace grapes {

std::optional<MatchingResult> min_cost_assignment(
    const std::vector<std::vector<long long>>& cost) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) return MatchingResult{};
    const int m = static_cast<int>(cost[0].size());
    if (n > m) return std::nullopt;

    constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

    // potentials over a 1-indexed grid; p[j] is the row matched to column j
    std::vector<long long> u(static_cast<std::size_t>(n) + 1, 0);
    std::vector<long long> v(static_cast<std::size_t>(m) + 1, 0);
    std::vector<int> p(static_cast<std::size_t>(m) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long long> minv(static_cast<std::size_t>(m) + 1, kInf);
        std::vector<bool> used(static_cast<std::size_t>(m) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = p[static_cast<std::size_t>(j0)];
            long long delta = kInf;
            int j1 = -1;
            for (int j = 1; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const long long cur = cost[static_cast<std::size_t>(i0) - 1]
                                          [static_cast<std::size_t>(j) - 1] -
                                      u[static_cast<std::size_t>(i0)] -
                                      v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    MatchingResult result;
    result.col_of_row.assign(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= m; ++j) {
        const int row = p[static_cast<std::size_t>(j)];
        if (row != 0) result.col_of_row[static_cast<std::size_t>(row) - 1] = j - 1;
    }
    for (int i = 0; i < n; ++i) {
        const int j = result.col_of_row[static_cast<std::size_t>(i)];
        const long long c = cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (c >= kForbiddenEdge) return std::nullopt;
        result.total += c;
    }
    return result;
}

}  // namespace grapes
