#pragma once

#include <optional>

#include "grapes/types.hpp"

namespace grapes {

// e^(1 - members/requirement), the shared decay factor of both peaked
// rewards. Peaks at 1.0 when the slot is exactly filled and strictly
// decreases as members grow.
double peaked_decay(int requirement_count, int members);

// Task-based peaked reward of homogeneous GRAPE: (u/k) * e^(1 - |C|/k) for a
// task worth u that needs k robots. Throws std::domain_error for k < 1.
double grape_reward(double task_utility, int robots_required, int coalition_size);

// Task/service peaked reward with the equal-value convention u_js = |S_s|,
// which cancels the leading factor and leaves the decay term alone.
// members_after_join counts the evaluating robot itself.
double grapes_reward(int requirement_count, int members_after_join);

struct Candidate {
    std::int32_t task = kVoidTask;
    std::int32_t service = -1;
    double reward = 0.0;
};

// Reward of the robot's current slot under the same members-including-self
// convention; 0 for the void task.
double current_reward(const Robot& robot, const Partition& belief, const ProblemInstance& instance);

// Scans every (task, service) slot the robot could serve and returns the
// best strict improvement over its current slot, or nullopt to stay. Ties
// break toward the lower task id, then the lower service index. With
// cap_enabled, slots already holding their required count (not counting
// this robot) are skipped.
std::optional<Candidate> best_move(const Robot& robot, const Partition& belief,
                                   const ProblemInstance& instance, bool cap_enabled);

}  // namespace grapes
