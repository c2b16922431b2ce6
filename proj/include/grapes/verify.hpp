#pragma once

#include <optional>
#include <utility>

#include "grapes/reward.hpp"
#include "grapes/types.hpp"

namespace grapes {

struct NashWitness {
    int robot = -1;
    Candidate candidate;
};

struct StabilityReport {
    bool stable = false;
    // robot that still has a strictly improving unilateral move
    std::optional<NashWitness> nash_witness;
    // (idle robot, assigned robot) pair that could profitably trade places
    std::optional<std::pair<int, int>> pair_witness;

    explicit operator bool() const { return stable; }
};

// Nash stability relative to the move set the agents actually had: no robot
// gets a strict best_move improvement under the given cap setting.
StabilityReport is_nash_stable(const Partition& partition, const ProblemInstance& instance,
                               bool cap_enabled);

// Nash stable under capped moves, and no idle robot can take over an
// assigned robot's slot while that robot covers some unmet requirement.
StabilityReport is_pairwise_stable(const Partition& partition, const ProblemInstance& instance);

struct OptimumResult {
    int utility = 0;
    Partition partition;
};

// Exhaustive search over all capability-respecting assignments. Guarded to
// small collectives; throws std::invalid_argument above 10 robots.
OptimumResult brute_force_optimum(const ProblemInstance& instance);

}  // namespace grapes
