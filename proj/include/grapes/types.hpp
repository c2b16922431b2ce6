#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace grapes {

// Per-service counts. For a robot this is a 0/1 capability mask; for a task
// it counts how many robots must perform each service.
using ServiceVector = std::vector<int>;

constexpr std::int32_t kVoidTask = -1;

struct Robot {
    std::int32_t id = 0;
    ServiceVector capabilities;  // 0/1 entries

    bool can_perform(int service) const {
        return capabilities[static_cast<std::size_t>(service)] != 0;
    }
    int capability_count() const;
};

struct Task {
    std::int32_t id = 0;
    ServiceVector requirement;
    int utility = 1;
};

// One robot's slot: a (task, service) pair, or the void task. The service
// index is only meaningful for a real task and is normalized to -1 otherwise.
struct Assignment {
    std::int32_t task = kVoidTask;
    std::int32_t service = -1;

    bool is_void() const { return task == kVoidTask; }
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Belief state over the whole collective: one assignment per robot id.
// Robots appear exactly once by construction, so coalitions cannot overlap.
struct Partition {
    std::vector<Assignment> assignments;

    int size() const { return static_cast<int>(assignments.size()); }
    Assignment& of(int robot) { return assignments[static_cast<std::size_t>(robot)]; }
    const Assignment& of(int robot) const { return assignments[static_cast<std::size_t>(robot)]; }

    friend bool operator==(const Partition&, const Partition&) = default;
};

Partition make_void_partition(int robot_count);

struct ProblemInstance {
    int service_type_count = 0;
    std::vector<Robot> robots;
    std::vector<Task> tasks;

    int robot_count() const { return static_cast<int>(robots.size()); }
    int task_count() const { return static_cast<int>(tasks.size()); }
    int total_utility() const;

    // throws std::invalid_argument when a structural invariant is broken
    void validate() const;

    nlohmann::ordered_json to_json() const;
    static ProblemInstance from_json(const nlohmann::json& j);

    // FNV-1a over the canonical content; stable run-to-run
    std::uint64_t content_hash() const;
};

// (task, service) occupancy counts for a partition
class FillCounts {
public:
    FillCounts(const ProblemInstance& instance, const Partition& partition);

    int at(int task, int service) const {
        return counts_[static_cast<std::size_t>(task) * static_cast<std::size_t>(service_types_) +
                       static_cast<std::size_t>(service)];
    }
    void add(const Assignment& a, int delta);

private:
    int service_types_;
    std::vector<int> counts_;
};

// true iff every service requirement of the task is covered by the robots
// assigned to (task, service)
bool task_satisfied(const Task& task, const Partition& partition);

// sum of utilities over satisfied tasks
int structure_utility(const ProblemInstance& instance, const Partition& partition);

// 100 * structure_utility / total utility; throws on a degenerate instance
// with no task utility
double percent_utility(const ProblemInstance& instance, const Partition& partition);

// checks assignment bounds and capability consistency against the instance
bool partition_valid(const ProblemInstance& instance, const Partition& partition);

}  // namespace grapes
