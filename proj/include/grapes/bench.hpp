#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "grapes/driver.hpp"
#include "grapes/probgen.hpp"
#include "grapes/simnet.hpp"

namespace grapes {

struct ExperimentConfig {
    std::vector<Algorithm> algorithms{Algorithm::GrapeS, Algorithm::PairGrapeS, Algorithm::Sda};
    std::vector<GridCell> cells;  // per-cell seeds are derived from base_seed
    int trials = 25;
    simnet::EngineMode mode = simnet::EngineMode::Sync;
    simnet::NetworkConfig net;
    simnet::CountingMode counting = simnet::CountingMode::OncePerSend;
    bool grape_cap = false;
    int quiescence_rounds = 3;
    int sda_epsilon = 1;
    int sda_round_window = 12;
    std::int64_t sync_iteration_cap = 200000;
    std::int64_t sim_time_limit_us = 3'600'000'000LL;
    std::int64_t wall_limit_ms = 600'000;
    std::uint64_t base_seed = 1;
    int jobs = 0;  // 0 = hardware concurrency
    bool strict = false;
    std::string out_dir = "out";

    // n in {50, 100} x {10, 50}% tasks x all four compositions
    static std::vector<GridCell> desk_grid();
    static ExperimentConfig from_json(const nlohmann::json& j);
    void validate() const;
};

struct TrialRecord {
    GridCell cell;
    int trial = 0;
    Algorithm algorithm = Algorithm::GrapeS;
    std::uint64_t instance_hash = 0;
    simnet::RunResult result;
};

std::uint64_t instance_seed_for(std::uint64_t base, const GridCell& cell, int trial);
std::uint64_t engine_seed_for(std::uint64_t instance_seed, Algorithm a, simnet::EngineMode mode);

// every algorithm in a trial consumes the identical generated instance
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config);

// deterministic per-trial rows; wall-clock timings go to a separate sidecar
void write_records_csv(const std::vector<TrialRecord>& records, std::ostream& out);
void write_timings_csv(const std::vector<TrialRecord>& records, std::ostream& out);
std::vector<TrialRecord> read_records_csv(std::istream& in);

// per-(cell, algorithm) median/min/max, lower-middle median for even counts
nlohmann::ordered_json summarize(const std::vector<TrialRecord>& records);

// runs the experiment and writes records.csv, timings.csv and summary.json
// under config.out_dir; returns 0, or 3 when strict and a trial timed out
int run_experiment_to_dir(const ExperimentConfig& config);

}  // namespace grapes
