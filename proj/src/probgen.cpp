#include "grapes/probgen.hpp"

#include <stdexcept>

namespace grapes {

void validate_cell(const GridCell& cell) {
    const auto& c = cell.composition;
    if (c.service_types < 1 || c.services_per_robot < 1)
        throw std::invalid_argument("cell: composition values must be positive");
    if (c.services_per_robot > c.service_types)
        throw std::invalid_argument("cell: services per robot exceeds service types");
    if (cell.collective_size < 1)
        throw std::invalid_argument("cell: collective size must be positive");
    if (cell.percent_tasks != 1 && cell.percent_tasks != 10 && cell.percent_tasks != 50)
        throw std::invalid_argument("cell: percent tasks must be 1, 10 or 50");
    if (cell.percent_tasks == 1 && cell.collective_size <= 100)
        throw std::invalid_argument("cell: 1% tasks needs a collective larger than 100 robots");
    const long long scaled = 1LL * cell.collective_size * cell.percent_tasks;
    if (scaled < 100)
        throw std::invalid_argument("cell: fewer than one task");
    if (scaled % 100 != 0)
        throw std::invalid_argument("cell: task count must come out integral");
}

GeneratedInstance generate(const GridCell& cell) {
    validate_cell(cell);
    const int m = static_cast<int>(1LL * cell.collective_size * cell.percent_tasks / 100);
    return generate_achievable(cell.collective_size, m, cell.composition, cell.seed);
}

GeneratedInstance generate_achievable(int robot_count, int task_count, CompositionSpec comp,
                                      std::uint64_t seed) {
    if (task_count < 1 || task_count > robot_count)
        throw std::invalid_argument("generate_achievable: need 1 <= tasks <= robots");
    if (comp.services_per_robot > comp.service_types || comp.services_per_robot < 1)
        throw std::invalid_argument("generate_achievable: bad composition");

    Rng rng(seed);
    GeneratedInstance out;
    ProblemInstance& inst = out.instance;
    inst.service_type_count = comp.service_types;

    std::vector<std::vector<int>> cap_lists(static_cast<std::size_t>(robot_count));
    for (int i = 0; i < robot_count; ++i) {
        Robot r;
        r.id = i;
        r.capabilities.assign(static_cast<std::size_t>(comp.service_types), 0);
        cap_lists[static_cast<std::size_t>(i)] =
            rng.sample_distinct(comp.service_types, comp.services_per_robot);
        for (int s : cap_lists[static_cast<std::size_t>(i)])
            r.capabilities[static_cast<std::size_t>(s)] = 1;
        inst.robots.push_back(std::move(r));
    }

    // balanced groups over a random permutation; sizes differ by at most one
    std::vector<int> order(static_cast<std::size_t>(robot_count));
    for (int i = 0; i < robot_count; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);

    out.certificate = make_void_partition(robot_count);
    const int base = robot_count / task_count;
    const int extra = robot_count % task_count;
    std::size_t next = 0;
    for (int j = 0; j < task_count; ++j) {
        Task t;
        t.id = j;
        t.requirement.assign(static_cast<std::size_t>(comp.service_types), 0);
        const int group = base + (j < extra ? 1 : 0);
        for (int g = 0; g < group; ++g) {
            const int robot = order[next++];
            const auto& caps = cap_lists[static_cast<std::size_t>(robot)];
            const int s = caps[rng.below(caps.size())];
            ++t.requirement[static_cast<std::size_t>(s)];
            out.certificate.of(robot) = Assignment{j, s};
        }
        t.utility = rng.uniform_int(1, 50);
        inst.tasks.push_back(std::move(t));
    }

    inst.validate();
    return out;
}

std::string instance_file_name(const GridCell& cell, int trial) {
    return std::to_string(cell.collective_size) + "_" + std::to_string(cell.percent_tasks) + "_" +
           std::to_string(cell.composition.service_types) + "-" +
           std::to_string(cell.composition.services_per_robot) + "_" + std::to_string(trial) +
           ".json";
}

}  // namespace grapes
