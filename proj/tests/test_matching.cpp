#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "grapes/matching.hpp"
#include "grapes/rng.hpp"

using namespace grapes;

namespace {

// reference: try every injective row->column map
long long brute_force_min(const std::vector<std::vector<long long>>& cost) {
    const int n = static_cast<int>(cost.size());
    const int m = static_cast<int>(cost[0].size());
    std::vector<int> cols(static_cast<std::size_t>(m));
    std::iota(cols.begin(), cols.end(), 0);
    long long best = kForbiddenEdge;
    std::sort(cols.begin(), cols.end());
    do {
        long long total = 0;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            const long long c = cost[static_cast<std::size_t>(i)]
                                    [static_cast<std::size_t>(cols[static_cast<std::size_t>(i)])];
            if (c >= kForbiddenEdge) ok = false;
            total += c;
        }
        if (ok) best = std::min(best, total);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return best;
}

}  // namespace

TEST_CASE("two slots over three robots picks 5 + 6") {
    // verified against the 2-subset enumeration: {5,9}=14 {5,6}=11 {9,6}=15
    std::vector<std::vector<long long>> cost = {{5, 9, 6}, {5, 9, 6}};
    auto r = min_cost_assignment(cost);
    REQUIRE(r.has_value());
    CHECK(r->total == 11);
}

TEST_CASE("forbidden edges make the problem infeasible") {
    std::vector<std::vector<long long>> cost = {{kForbiddenEdge, kForbiddenEdge},
                                                {1, 2}};
    CHECK_FALSE(min_cost_assignment(cost).has_value());
}

TEST_CASE("more rows than columns is infeasible") {
    std::vector<std::vector<long long>> cost = {{1}, {2}};
    CHECK_FALSE(min_cost_assignment(cost).has_value());
}

TEST_CASE("empty problem costs nothing") {
    auto r = min_cost_assignment({});
    REQUIRE(r.has_value());
    CHECK(r->total == 0);
}

TEST_CASE("matches brute force on random small problems") {
    Rng rng(123);
    for (int round = 0; round < 300; ++round) {
        const int n = rng.uniform_int(1, 4);
        const int m = rng.uniform_int(n, 6);
        std::vector<std::vector<long long>> cost(
            static_cast<std::size_t>(n), std::vector<long long>(static_cast<std::size_t>(m)));
        for (auto& row : cost)
            for (auto& c : row)
                c = rng.bernoulli(0.2) ? kForbiddenEdge : rng.uniform_int(0, 60);
        const long long expected = brute_force_min(cost);
        auto got = min_cost_assignment(cost);
        if (expected >= kForbiddenEdge) {
            CHECK_FALSE(got.has_value());
        } else {
            REQUIRE(got.has_value());
            CHECK(got->total == expected);
            // assignment must be injective and consistent with the total
            std::vector<bool> used(static_cast<std::size_t>(m), false);
            long long sum = 0;
            for (int i = 0; i < n; ++i) {
                const int j = got->col_of_row[static_cast<std::size_t>(i)];
                CHECK_FALSE(used[static_cast<std::size_t>(j)]);
                used[static_cast<std::size_t>(j)] = true;
                sum += cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
            CHECK(sum == got->total);
        }
    }
}
