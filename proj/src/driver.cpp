#include "grapes/driver.hpp"

#include <memory>
#include <stdexcept>

#include "grapes/grape_agent.hpp"
#include "grapes/sda.hpp"
#include "grapes/verify.hpp"

namespace grapes {

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::GrapeS: return "grape_s";
        case Algorithm::PairGrapeS: return "pair_grape_s";
        case Algorithm::Sda: return "sda";
    }
    return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "grape_s") return Algorithm::GrapeS;
    if (name == "pair_grape_s") return Algorithm::PairGrapeS;
    if (name == "sda") return Algorithm::Sda;
    throw std::invalid_argument("unknown algorithm: " + name);
}

namespace {

struct GrapeRun {
    std::vector<std::unique_ptr<GrapeAgent>> agents;
    std::vector<simnet::Agent*> handles;
    std::uint64_t world_version = 0;

    // probe memo: each consensus version gets verified once
    std::uint64_t probed_version = ~0ULL;
    BeliefVersion verified{};
    bool has_verified = false;
};

struct SdaRun {
    std::vector<std::unique_ptr<simnet::Agent>> agents;
    std::vector<simnet::Agent*> handles;
    std::vector<SdaServiceAgent*> services;
    std::uint64_t world_version = 0;
    std::uint64_t probed_version = ~0ULL;
};

WageBoard assemble_board(const ProblemInstance& instance, const SdaRun& run, int epsilon) {
    WageBoard board = init_auction(instance, epsilon);
    for (const SdaServiceAgent* sa : run.services) {
        for (const auto& e : sa->book()) {
            auto idx = static_cast<std::size_t>(e.robot);
            board.wage[idx] = e.wage;
            board.purchased[idx] = e.purchased;
            board.owner_task[idx] = e.owner_task;
            board.sold_service[idx] = e.sold_service;
        }
    }
    return board;
}

}  // namespace

simnet::RunResult run_trial(const ProblemInstance& instance, const TrialSpec& spec,
                            std::uint64_t engine_seed) {
    instance.validate();

    const bool pairwise = spec.algorithm == Algorithm::PairGrapeS;
    const bool cap = pairwise || spec.grape_cap;

    simnet::RunResult result;

    simnet::SyncConfig sync_cfg;
    sync_cfg.max_iterations = spec.sync_iteration_cap;
    sync_cfg.counting = spec.counting;

    simnet::AsyncConfig async_cfg;
    async_cfg.net = spec.net;
    async_cfg.net.seed = engine_seed;
    async_cfg.counting = spec.counting;
    async_cfg.reactivity = spec.reactivity;
    async_cfg.sim_time_limit_us = spec.sim_time_limit_us;
    async_cfg.wall_limit_ms = spec.wall_limit_ms;

    if (spec.algorithm == Algorithm::Sda) {
        SdaRun run;
        for (int s = 0; s < instance.service_type_count; ++s) {
            auto agent = std::make_unique<SdaServiceAgent>(instance, s, spec.sda_epsilon,
                                                           &run.world_version);
            run.services.push_back(agent.get());
            run.agents.push_back(std::move(agent));
        }
        const int pending_timeout = 4;
        for (int t = 0; t < instance.task_count(); ++t)
            run.agents.push_back(std::make_unique<SdaTaskAgent>(
                instance, t, spec.sda_epsilon, pending_timeout, &run.world_version));
        for (auto& a : run.agents) run.handles.push_back(a.get());

        auto snapshot = [&]() {
            return board_partition(assemble_board(instance, run, spec.sda_epsilon));
        };
        auto probe = [&]() -> std::optional<Partition> {
            if (run.world_version == run.probed_version) return std::nullopt;
            run.probed_version = run.world_version;
            WageBoard board = assemble_board(instance, run, spec.sda_epsilon);
            if (!auction_finished(board, instance)) return std::nullopt;
            return board_partition(board);
        };

        if (spec.mode == simnet::EngineMode::Sync) {
            result = simnet::run_sync(run.handles, sync_cfg, probe, snapshot);
        } else {
            async_cfg.epoch_period_us = spec.sda_round_window * async_cfg.net.mean_latency_us();
            result = simnet::run_async(run.handles, async_cfg, probe, snapshot);
        }
    } else {
        GrapeRun run;
        GrapeConfig agent_cfg;
        agent_cfg.cap = cap;
        agent_cfg.pairwise = pairwise;
        agent_cfg.quiescence_rounds = spec.quiescence_rounds;
        for (int i = 0; i < instance.robot_count(); ++i)
            run.agents.push_back(
                std::make_unique<GrapeAgent>(instance, i, agent_cfg, &run.world_version));
        for (auto& a : run.agents) run.handles.push_back(a.get());

        auto snapshot = [&]() { return run.agents[0]->belief(); };
        auto probe = [&]() -> std::optional<Partition> {
            if (run.world_version == run.probed_version) return std::nullopt;
            run.probed_version = run.world_version;
            const BeliefVersion v0 = run.agents[0]->version();
            for (const auto& a : run.agents)
                if (!(a->version() == v0)) return std::nullopt;
            if (run.has_verified && v0 == run.verified) return std::nullopt;
            run.verified = v0;
            run.has_verified = true;
            const Partition& p = run.agents[0]->belief();
            const bool stable = pairwise ? is_pairwise_stable(p, instance).stable
                                         : is_nash_stable(p, instance, cap).stable;
            if (!stable) return std::nullopt;
            return p;
        };

        if (spec.mode == simnet::EngineMode::Sync) {
            result = simnet::run_sync(run.handles, sync_cfg, probe, snapshot);
        } else {
            result = simnet::run_async(run.handles, async_cfg, probe, snapshot);
        }
    }

    result.percent = percent_utility(instance, result.partition);
    result.stable_nash = is_nash_stable(result.partition, instance, cap).stable;
    result.stable_pairwise = is_pairwise_stable(result.partition, instance).stable;
    return result;
}

}  // namespace grapes
