#include "grapes/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace grapes {

double peaked_decay(int requirement_count, int members) {
    return std::exp(1.0 - static_cast<double>(members) / static_cast<double>(requirement_count));
}

double grape_reward(double task_utility, int robots_required, int coalition_size) {
    if (robots_required < 1)
        throw std::domain_error("grape_reward: robots_required must be >= 1");
    if (coalition_size < 1)
        throw std::domain_error("grape_reward: coalition_size must be >= 1");
    return task_utility / static_cast<double>(robots_required) *
           peaked_decay(robots_required, coalition_size);
}

double grapes_reward(int requirement_count, int members_after_join) {
    if (requirement_count < 1)
        throw std::domain_error("grapes_reward: requirement_count must be >= 1");
    if (members_after_join < 1)
        throw std::domain_error("grapes_reward: members_after_join must be >= 1");
    // u_js = |S_s| cancels against the divisor
    return peaked_decay(requirement_count, members_after_join);
}

double current_reward(const Robot& robot, const Partition& belief,
                      const ProblemInstance& instance) {
    const Assignment& cur = belief.of(robot.id);
    if (cur.is_void()) return 0.0;
    const Task& t = instance.tasks[static_cast<std::size_t>(cur.task)];
    const int req = t.requirement[static_cast<std::size_t>(cur.service)];
    int members = 0;
    for (const Assignment& a : belief.assignments)
        if (a.task == cur.task && a.service == cur.service) ++members;
    return grapes_reward(req, members);
}

std::optional<Candidate> best_move(const Robot& robot, const Partition& belief,
                                   const ProblemInstance& instance, bool cap_enabled) {
    FillCounts counts(instance, belief);
    const Assignment& cur = belief.of(robot.id);
    counts.add(cur, -1);  // evaluate all slots without this robot

    double stay = 0.0;
    if (!cur.is_void()) {
        const int req = instance.tasks[static_cast<std::size_t>(cur.task)]
                            .requirement[static_cast<std::size_t>(cur.service)];
        stay = grapes_reward(req, counts.at(cur.task, cur.service) + 1);
    }

    std::optional<Candidate> best;
    for (const Task& t : instance.tasks) {
        for (int s = 0; s < instance.service_type_count; ++s) {
            const int req = t.requirement[static_cast<std::size_t>(s)];
            if (req == 0 || !robot.can_perform(s)) continue;
            const int others = counts.at(t.id, s);
            if (cap_enabled && others >= req) continue;
            const double reward = grapes_reward(req, others + 1);
            // strict improvement over staying; first hit wins ties because
            // scanning follows (task id, service index) order
            if (reward > stay && (!best || reward > best->reward))
                best = Candidate{t.id, s, reward};
        }
    }
    return best;
}

}  // namespace grapes
