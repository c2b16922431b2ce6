#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "grapes/bench.hpp"
#include "grapes/driver.hpp"
#include "grapes/probgen.hpp"

namespace fs = std::filesystem;
using namespace grapes;

namespace {

bool parse_latency(const std::string& text, simnet::NetworkConfig& net) {
    const auto sep = text.find(':');
    if (sep == std::string::npos) return false;
    try {
        net.latency_lo_us = std::stoll(text.substr(0, sep));
        net.latency_hi_us = std::stoll(text.substr(sep + 1));
    } catch (...) {
        return false;
    }
    return net.latency_lo_us >= 0 && net.latency_hi_us >= net.latency_lo_us;
}

int cmd_gen(const GridCell& proto, int trials, std::uint64_t seed, const std::string& out_dir) {
    fs::create_directories(out_dir);
    for (int trial = 0; trial < trials; ++trial) {
        GridCell cell = proto;
        cell.seed = instance_seed_for(seed, cell, trial);
        const GeneratedInstance gen = generate(cell);
        const fs::path path = fs::path(out_dir) / instance_file_name(cell, trial);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << gen.instance.to_json().dump(2) << "\n";
    }
    std::cerr << "wrote " << trials << " instances to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coalition formation testbed: GRAPE-S, Pair-GRAPE-S and the SDA auction "
                 "under synchronous and asynchronous simulated networks"};
    app.require_subcommand(1);

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate achievable problem instances");
    GridCell gen_cell;
    int gen_trials = 25;
    std::uint64_t gen_seed = 1;
    std::string gen_out = "instances";
    gen_cmd->add_option("--n", gen_cell.collective_size, "collective size")->required();
    gen_cmd->add_option("--pct", gen_cell.percent_tasks, "percent tasks (1, 10 or 50)")
        ->required();
    gen_cmd->add_option("--types", gen_cell.composition.service_types, "service types")
        ->required();
    gen_cmd->add_option("--per-robot", gen_cell.composition.services_per_robot,
                        "services per robot")
        ->required();
    gen_cmd->add_option("--trials", gen_trials, "instances to generate");
    gen_cmd->add_option("--seed", gen_seed, "base seed");
    gen_cmd->add_option("--out", gen_out, "output directory");

    // run
    auto* run_cmd = app.add_subcommand("run", "run the experiment grid and export metrics");
    std::string run_config;
    std::string run_out;
    std::string run_mode;
    std::string run_latency;
    std::string run_cap;
    std::string run_algos;
    std::vector<std::string> run_cells;
    double run_loss = -1.0;
    std::int64_t run_seed = -1;
    int run_trials = -1;
    int run_jobs = -1;
    bool run_strict = false;
    run_cmd->add_option("--config", run_config, "experiment config JSON file");
    run_cmd->add_option("--out", run_out, "output directory");
    run_cmd->add_option("--seed", run_seed, "base seed");
    run_cmd->add_option("--trials", run_trials, "trials per cell");
    run_cmd->add_option("--mode", run_mode, "sync|async");
    run_cmd->add_option("--loss", run_loss, "async loss probability");
    run_cmd->add_option("--latency", run_latency, "async latency range lo:hi in microseconds");
    run_cmd->add_option("--cap", run_cap, "GRAPE-S coalition cap: on|off");
    run_cmd->add_option("--algos", run_algos, "comma list: grape_s,pair_grape_s,sda");
    run_cmd->add_option("--cells", run_cells,
                        "cells as n:pct:types:perRobot (repeatable); default desk grid");
    run_cmd->add_option("--jobs", run_jobs, "worker threads");
    run_cmd->add_flag("--strict", run_strict, "exit 3 when any trial times out");

    // summarize
    auto* sum_cmd = app.add_subcommand("summarize", "per-cell statistics from a records CSV");
    std::string sum_in;
    std::string sum_out;
    sum_cmd->add_option("--in", sum_in, "records.csv path")->required();
    sum_cmd->add_option("--out", sum_out, "summary JSON path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen_cmd) return cmd_gen(gen_cell, gen_trials, gen_seed, gen_out);

        if (*run_cmd) {
            ExperimentConfig cfg;
            if (!run_config.empty()) {
                std::ifstream in(run_config);
                if (!in) {
                    std::cerr << "error: cannot read config " << run_config << "\n";
                    return 2;
                }
                try {
                    nlohmann::json j;
                    in >> j;
                    cfg = ExperimentConfig::from_json(j);
                } catch (const nlohmann::json::exception& e) {
                    std::cerr << "config error: " << e.what() << "\n";
                    return 2;
                }
            } else {
                cfg.cells = ExperimentConfig::desk_grid();
            }
            if (!run_cells.empty()) {
                cfg.cells.clear();
                for (const std::string& text : run_cells) {
                    GridCell cell;
                    if (std::sscanf(text.c_str(), "%d:%d:%d:%d", &cell.collective_size,
                                    &cell.percent_tasks, &cell.composition.service_types,
                                    &cell.composition.services_per_robot) != 4) {
                        std::cerr << "error: bad cell spec " << text << "\n";
                        return 2;
                    }
                    cfg.cells.push_back(cell);
                }
            }
            if (!run_algos.empty()) {
                cfg.algorithms.clear();
                std::stringstream ss(run_algos);
                std::string name;
                while (std::getline(ss, name, ',')) cfg.algorithms.push_back(algorithm_from_name(name));
            }
            if (!run_out.empty()) cfg.out_dir = run_out;
            if (run_seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(run_seed);
            if (run_trials > 0) cfg.trials = run_trials;
            if (!run_mode.empty()) {
                if (run_mode == "sync") cfg.mode = simnet::EngineMode::Sync;
                else if (run_mode == "async") cfg.mode = simnet::EngineMode::Async;
                else {
                    std::cerr << "error: mode must be sync or async\n";
                    return 2;
                }
            }
            if (run_loss >= 0.0) cfg.net.loss = run_loss;
            if (!run_latency.empty() && !parse_latency(run_latency, cfg.net)) {
                std::cerr << "error: latency must be lo:hi in microseconds\n";
                return 2;
            }
            if (!run_cap.empty()) {
                if (run_cap == "on") cfg.grape_cap = true;
                else if (run_cap == "off") cfg.grape_cap = false;
                else {
                    std::cerr << "error: cap must be on or off\n";
                    return 2;
                }
            }
            if (run_jobs >= 0) cfg.jobs = run_jobs;
            cfg.strict = cfg.strict || run_strict;
            cfg.validate();
            return run_experiment_to_dir(cfg);
        }

        if (*sum_cmd) {
            std::ifstream in(sum_in);
            if (!in) {
                std::cerr << "error: cannot read " << sum_in << "\n";
                return 2;
            }
            const auto records = read_records_csv(in);
            const auto summary = summarize(records);
            if (sum_out.empty()) {
                std::cout << summary.dump(2) << "\n";
            } else {
                std::ofstream out(sum_out, std::ios::binary);
                if (!out) {
                    std::cerr << "error: cannot write " << sum_out << "\n";
                    return 2;
                }
                out << summary.dump(2) << "\n";
            }
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
