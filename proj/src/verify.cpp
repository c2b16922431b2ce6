#include "grapes/verify.hpp"

#include <stdexcept>

namespace grapes {

StabilityReport is_nash_stable(const Partition& partition, const ProblemInstance& instance,
                               bool cap_enabled) {
    StabilityReport report;
    for (const Robot& robot : instance.robots) {
        // same move selection the agents run, so verifier and agents agree
        if (auto mv = best_move(robot, partition, instance, cap_enabled)) {
            report.stable = false;
            report.nash_witness = NashWitness{robot.id, *mv};
            return report;
        }
    }
    report.stable = true;
    return report;
}

StabilityReport is_pairwise_stable(const Partition& partition, const ProblemInstance& instance) {
    // the pairwise phase always runs with capped coalitions
    StabilityReport report = is_nash_stable(partition, instance, /*cap_enabled=*/true);
    if (!report.stable) return report;

    FillCounts counts(instance, partition);

    // which services some idle robot could take over
    std::vector<int> idle_with(static_cast<std::size_t>(instance.service_type_count), -1);
    for (const Robot& r : instance.robots) {
        if (!partition.of(r.id).is_void()) continue;
        for (int s = 0; s < instance.service_type_count; ++s)
            if (r.can_perform(s) && idle_with[static_cast<std::size_t>(s)] < 0)
                idle_with[static_cast<std::size_t>(s)] = r.id;
    }

    for (const Robot& a : instance.robots) {
        const Assignment& slot = partition.of(a.id);
        if (slot.is_void()) continue;
        const int b = idle_with[static_cast<std::size_t>(slot.service)];
        if (b < 0) continue;
        // does this assigned robot cover some unmet slot other than its own?
        for (const Task& t : instance.tasks) {
            for (int s = 0; s < instance.service_type_count; ++s) {
                if (t.id == slot.task && s == slot.service) continue;
                if (t.requirement[static_cast<std::size_t>(s)] == 0 || !a.can_perform(s)) continue;
                if (counts.at(t.id, s) < t.requirement[static_cast<std::size_t>(s)]) {
                    report.stable = false;
                    report.pair_witness = std::make_pair(b, static_cast<int>(a.id));
                    return report;
                }
            }
        }
    }
    report.stable = true;
    return report;
}

namespace {

struct OptimumSearch {
    const ProblemInstance& inst;
    std::vector<int> deficit;       // per (task, service)
    std::vector<int> task_deficit;  // per task
    int satisfied = 0;
    int open = 0;  // utility of tasks that could still complete
    std::vector<Assignment> current;
    int best = -1;
    std::vector<Assignment> best_assignments;

    explicit OptimumSearch(const ProblemInstance& instance) : inst(instance) {
        const std::size_t slots = static_cast<std::size_t>(inst.task_count()) *
                                  static_cast<std::size_t>(inst.service_type_count);
        deficit.resize(slots);
        task_deficit.assign(static_cast<std::size_t>(inst.task_count()), 0);
        for (const Task& t : inst.tasks) {
            for (int s = 0; s < inst.service_type_count; ++s) {
                const int r = t.requirement[static_cast<std::size_t>(s)];
                slot(t.id, s) = r;
                task_deficit[static_cast<std::size_t>(t.id)] += r;
            }
            open += t.utility;
        }
        current.assign(static_cast<std::size_t>(inst.robot_count()), Assignment{});
    }

    int& slot(int t, int s) {
        return deficit[static_cast<std::size_t>(t) *
                           static_cast<std::size_t>(inst.service_type_count) +
                       static_cast<std::size_t>(s)];
    }

    void dfs(int i) {
        if (satisfied + open <= best) return;
        if (i == inst.robot_count()) {
            if (satisfied > best) {
                best = satisfied;
                best_assignments = current;
            }
            return;
        }
        const Robot& robot = inst.robots[static_cast<std::size_t>(i)];
        // joining a slot beyond its requirement never changes the score, so
        // only open slots and the void task are explored
        for (const Task& t : inst.tasks) {
            for (int s = 0; s < inst.service_type_count; ++s) {
                if (!robot.can_perform(s) || slot(t.id, s) == 0) continue;
                --slot(t.id, s);
                const int before = task_deficit[static_cast<std::size_t>(t.id)]--;
                if (before == 1) {
                    satisfied += t.utility;
                    open -= t.utility;
                }
                current[static_cast<std::size_t>(i)] = Assignment{t.id, s};
                dfs(i + 1);
                if (before == 1) {
                    satisfied -= t.utility;
                    open += t.utility;
                }
                ++task_deficit[static_cast<std::size_t>(t.id)];
                ++slot(t.id, s);
            }
        }
        current[static_cast<std::size_t>(i)] = Assignment{};
        dfs(i + 1);
    }
};

}  // namespace

OptimumResult brute_force_optimum(const ProblemInstance& instance) {
    if (instance.robot_count() > 10)
        throw std::invalid_argument("brute_force_optimum: refusing more than 10 robots");
    instance.validate();
    OptimumSearch search(instance);
    search.dfs(0);
    OptimumResult result;
    result.utility = search.best;
    result.partition.assignments = search.best_assignments;
    return result;
}

}  // namespace grapes
