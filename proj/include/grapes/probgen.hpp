#pragma once

#include <cstdint>
#include <string>

#include "grapes/rng.hpp"
#include "grapes/types.hpp"

namespace grapes {

struct CompositionSpec {
    int service_types = 5;
    int services_per_robot = 1;

    friend bool operator==(const CompositionSpec&, const CompositionSpec&) = default;
};

struct GridCell {
    int collective_size = 100;
    int percent_tasks = 10;
    CompositionSpec composition;
    std::uint64_t seed = 0;
};

// throws std::invalid_argument when the cell is outside the supported grid
void validate_cell(const GridCell& cell);

struct GeneratedInstance {
    ProblemInstance instance;
    // the hidden perfect assignment used to build the requirements; replaying
    // it always yields 100% utility, certifying achievability at any scale
    Partition certificate;
};

// Achievable-mission generator: robots are split into one balanced group per
// task and each task demands exactly the multiset of services its group
// chose, so the whole collective is both sufficient and necessary.
GeneratedInstance generate(const GridCell& cell);

// Lower-level entry taking an explicit task count; used by generate() and by
// tests that need off-grid shapes.
GeneratedInstance generate_achievable(int robot_count, int task_count, CompositionSpec comp,
                                      std::uint64_t seed);

// {n}_{pct}_{types}-{perRobot}_{trial}.json
std::string instance_file_name(const GridCell& cell, int trial);

}  // namespace grapes
