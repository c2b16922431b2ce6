#include "grapes/types.hpp"

#include <numeric>
#include <stdexcept>

namespace grapes {

int Robot::capability_count() const {
    return std::accumulate(capabilities.begin(), capabilities.end(), 0);
}

Partition make_void_partition(int robot_count) {
    Partition p;
    p.assignments.assign(static_cast<std::size_t>(robot_count), Assignment{});
    return p;
}

int ProblemInstance::total_utility() const {
    int total = 0;
    for (const Task& t : tasks) total += t.utility;
    return total;
}

void ProblemInstance::validate() const {
    if (service_type_count <= 0)
        throw std::invalid_argument("instance: service_type_count must be positive");
    for (std::size_t i = 0; i < robots.size(); ++i) {
        const Robot& r = robots[i];
        if (r.id != static_cast<std::int32_t>(i))
            throw std::invalid_argument("instance: robot ids must be dense and 0-based");
        if (r.capabilities.size() != static_cast<std::size_t>(service_type_count))
            throw std::invalid_argument("instance: robot capability vector length mismatch");
        int caps = 0;
        for (int c : r.capabilities) {
            if (c != 0 && c != 1)
                throw std::invalid_argument("instance: robot capabilities must be 0/1");
            caps += c;
        }
        if (caps == 0) throw std::invalid_argument("instance: robot with no capability");
    }
    for (std::size_t j = 0; j < tasks.size(); ++j) {
        const Task& t = tasks[j];
        if (t.id != static_cast<std::int32_t>(j))
            throw std::invalid_argument("instance: task ids must be dense and 0-based");
        if (t.requirement.size() != static_cast<std::size_t>(service_type_count))
            throw std::invalid_argument("instance: task requirement vector length mismatch");
        if (t.utility < 1) throw std::invalid_argument("instance: task utility must be >= 1");
        int req = 0;
        for (int c : t.requirement) {
            if (c < 0) throw std::invalid_argument("instance: negative requirement");
            req += c;
        }
        if (req == 0) throw std::invalid_argument("instance: task requires no service");
    }
}

nlohmann::ordered_json ProblemInstance::to_json() const {
    nlohmann::ordered_json j;
    j["service_types"] = service_type_count;
    auto& jr = j["robots"] = nlohmann::ordered_json::array();
    for (const Robot& r : robots) jr.push_back(r.capabilities);
    auto& jt = j["tasks"] = nlohmann::ordered_json::array();
    for (const Task& t : tasks) {
        nlohmann::ordered_json o;
        o["req"] = t.requirement;
        o["utility"] = t.utility;
        jt.push_back(std::move(o));
    }
    return j;
}

ProblemInstance ProblemInstance::from_json(const nlohmann::json& j) {
    ProblemInstance inst;
    inst.service_type_count = j.at("service_types").get<int>();
    std::int32_t rid = 0;
    for (const auto& caps : j.at("robots")) {
        Robot r;
        r.id = rid++;
        r.capabilities = caps.get<ServiceVector>();
        inst.robots.push_back(std::move(r));
    }
    std::int32_t tid = 0;
    for (const auto& o : j.at("tasks")) {
        Task t;
        t.id = tid++;
        t.requirement = o.at("req").get<ServiceVector>();
        t.utility = o.at("utility").get<int>();
        inst.tasks.push_back(std::move(t));
    }
    inst.validate();
    return inst;
}

std::uint64_t ProblemInstance::content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    feed(static_cast<std::uint64_t>(service_type_count));
    feed(static_cast<std::uint64_t>(robots.size()));
    for (const Robot& r : robots)
        for (int c : r.capabilities) feed(static_cast<std::uint64_t>(c));
    feed(static_cast<std::uint64_t>(tasks.size()));
    for (const Task& t : tasks) {
        for (int c : t.requirement) feed(static_cast<std::uint64_t>(c));
        feed(static_cast<std::uint64_t>(t.utility));
    }
    return h;
}

FillCounts::FillCounts(const ProblemInstance& instance, const Partition& partition)
    : service_types_(instance.service_type_count),
      counts_(static_cast<std::size_t>(instance.task_count()) *
                  static_cast<std::size_t>(instance.service_type_count),
              0) {
    for (const Assignment& a : partition.assignments) add(a, 1);
}

void FillCounts::add(const Assignment& a, int delta) {
    if (a.is_void()) return;
    counts_[static_cast<std::size_t>(a.task) * static_cast<std::size_t>(service_types_) +
            static_cast<std::size_t>(a.service)] += delta;
}

bool task_satisfied(const Task& task, const Partition& partition) {
    const int s_count = static_cast<int>(task.requirement.size());
    std::vector<int> have(task.requirement.size(), 0);
    for (const Assignment& a : partition.assignments)
        if (a.task == task.id) ++have[static_cast<std::size_t>(a.service)];
    for (int s = 0; s < s_count; ++s)
        if (have[static_cast<std::size_t>(s)] < task.requirement[static_cast<std::size_t>(s)])
            return false;
    return true;
}

int structure_utility(const ProblemInstance& instance, const Partition& partition) {
    FillCounts counts(instance, partition);
    int total = 0;
    for (const Task& t : instance.tasks) {
        bool ok = true;
        for (int s = 0; s < instance.service_type_count && ok; ++s)
            ok = counts.at(t.id, s) >= t.requirement[static_cast<std::size_t>(s)];
        if (ok) total += t.utility;
    }
    return total;
}

double percent_utility(const ProblemInstance& instance, const Partition& partition) {
    const int total = instance.total_utility();
    if (instance.tasks.empty() || total <= 0)
        throw std::invalid_argument("percent_utility: degenerate instance with no task utility");
    const int got = structure_utility(instance, partition);
    if (got == total) return 100.0;
    return 100.0 * static_cast<double>(got) / static_cast<double>(total);
}

bool partition_valid(const ProblemInstance& instance, const Partition& partition) {
    if (partition.size() != instance.robot_count()) return false;
    for (int i = 0; i < partition.size(); ++i) {
        const Assignment& a = partition.of(i);
        if (a.is_void()) {
            if (a.service != -1) return false;
            continue;
        }
        if (a.task < 0 || a.task >= instance.task_count()) return false;
        if (a.service < 0 || a.service >= instance.service_type_count) return false;
        if (!instance.robots[static_cast<std::size_t>(i)].can_perform(a.service)) return false;
    }
    return true;
}

}  // namespace grapes
