#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "grapes/probgen.hpp"
#include "grapes/types.hpp"

using namespace grapes;

TEST_CASE("grid cell validation") {
    CHECK_NOTHROW(validate_cell({100, 10, {5, 1}, 0}));
    CHECK_NOTHROW(validate_cell({500, 1, {10, 5}, 0}));
    // 1% tasks only above 100 robots
    CHECK_THROWS_AS(validate_cell({100, 1, {5, 1}, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_cell({50, 1, {5, 1}, 0}), std::invalid_argument);
    // task count must come out integral
    CHECK_THROWS_AS(validate_cell({55, 10, {5, 1}, 0}), std::invalid_argument);
    // composition bounds
    CHECK_THROWS_AS(validate_cell({100, 10, {5, 6}, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_cell({100, 25, {5, 1}, 0}), std::invalid_argument);
}

TEST_CASE("generate builds the advertised shape") {
    GeneratedInstance gen = generate({100, 10, {10, 5}, 42});
    const ProblemInstance& inst = gen.instance;
    CHECK(inst.robot_count() == 100);
    CHECK(inst.task_count() == 10);
    CHECK(inst.service_type_count == 10);

    int total_req = 0;
    for (const Task& t : inst.tasks)
        total_req += std::accumulate(t.requirement.begin(), t.requirement.end(), 0);
    CHECK(total_req == 100);

    for (const Robot& r : inst.robots) CHECK(r.capability_count() == 5);
    for (const Task& t : inst.tasks) {
        CHECK(t.utility >= 1);
        CHECK(t.utility <= 50);
    }
}

TEST_CASE("smallest cell: two robots, one task") {
    GeneratedInstance gen = generate_achievable(2, 1, {5, 1}, 9);
    CHECK(gen.instance.task_count() == 1);
    const Task& t = gen.instance.tasks[0];
    CHECK(std::accumulate(t.requirement.begin(), t.requirement.end(), 0) == 2);
    CHECK(percent_utility(gen.instance, gen.certificate) == 100.0);
}

TEST_CASE("same seed gives byte-identical instances") {
    GeneratedInstance a = generate({100, 50, {5, 5}, 1234});
    GeneratedInstance b = generate({100, 50, {5, 5}, 1234});
    CHECK(a.instance.to_json().dump() == b.instance.to_json().dump());
    CHECK(a.certificate == b.certificate);
    GeneratedInstance c = generate({100, 50, {5, 5}, 1235});
    CHECK(a.instance.to_json().dump() != c.instance.to_json().dump());
}

TEST_CASE("achievability certificate replays to 100 percent") {
    std::uint64_t seed = 77;
    for (int n : {10, 40, 100})
        for (int pct : {10, 50})
            for (CompositionSpec comp :
                 {CompositionSpec{5, 1}, CompositionSpec{5, 5}, CompositionSpec{10, 1},
                  CompositionSpec{10, 5}}) {
                GeneratedInstance gen = generate({n, pct, comp, seed++});
                CHECK(partition_valid(gen.instance, gen.certificate));
                CHECK(percent_utility(gen.instance, gen.certificate) == 100.0);
                // requirement conservation: the collective is exactly spent
                int total_req = 0;
                for (const Task& t : gen.instance.tasks)
                    total_req +=
                        std::accumulate(t.requirement.begin(), t.requirement.end(), 0);
                CHECK(total_req == n);
            }
}

TEST_CASE("homogeneous compositions make every robot fully capable") {
    GeneratedInstance gen = generate({40, 10, {5, 5}, 3});
    for (const Robot& r : gen.instance.robots) CHECK(r.capability_count() == 5);
}

TEST_CASE("balanced groups differ by at most one") {
    // 100 robots over 3 tasks cannot come from the grid; use the raw entry
    GeneratedInstance gen = generate_achievable(100, 3, {5, 1}, 5);
    std::vector<int> sizes;
    for (const Task& t : gen.instance.tasks)
        sizes.push_back(std::accumulate(t.requirement.begin(), t.requirement.end(), 0));
    const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    CHECK(*hi - *lo <= 1);
}

TEST_CASE("instance file naming") {
    CHECK(instance_file_name({100, 10, {10, 5}, 0}, 7) == "100_10_10-5_7.json");
}
