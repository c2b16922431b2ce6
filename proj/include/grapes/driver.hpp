#pragma once

#include <cstdint>
#include <string>

#include "grapes/simnet.hpp"
#include "grapes/types.hpp"

namespace grapes {

enum class Algorithm { GrapeS, PairGrapeS, Sda };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct TrialSpec {
    Algorithm algorithm = Algorithm::GrapeS;
    simnet::EngineMode mode = simnet::EngineMode::Sync;
    simnet::CountingMode counting = simnet::CountingMode::OncePerSend;
    simnet::NetworkConfig net;
    simnet::Reactivity reactivity = simnet::Reactivity::Reactive;

    // GRAPE-S runs uncapped unless asked; Pair-GRAPE-S always caps
    bool grape_cap = false;
    int quiescence_rounds = 3;

    int sda_epsilon = 1;
    // service agents advance one price level per this many mean latencies; the
    // settle window that lets bids and awards from the previous level land
    int sda_round_window = 12;

    std::int64_t sync_iteration_cap = 200000;
    std::int64_t sim_time_limit_us = 3'600'000'000LL;
    std::int64_t wall_limit_ms = 600'000;
};

// Builds the agents for one algorithm, runs them under the requested engine,
// and scores the final partition. Deterministic given (instance, spec, seed).
simnet::RunResult run_trial(const ProblemInstance& instance, const TrialSpec& spec,
                            std::uint64_t engine_seed);

}  // namespace grapes
