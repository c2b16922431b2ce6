#include "grapes/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace grapes {

std::vector<GridCell> ExperimentConfig::desk_grid() {
    std::vector<GridCell> cells;
    for (int n : {50, 100})
        for (int pct : {10, 50})
            for (const CompositionSpec& comp :
                 {CompositionSpec{5, 1}, CompositionSpec{5, 5}, CompositionSpec{10, 1},
                  CompositionSpec{10, 5}})
                cells.push_back(GridCell{n, pct, comp, 0});
    return cells;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (j.contains("algorithms")) {
        cfg.algorithms.clear();
        for (const auto& name : j.at("algorithms"))
            cfg.algorithms.push_back(algorithm_from_name(name.get<std::string>()));
    }
    if (j.contains("cells")) {
        for (const auto& c : j.at("cells")) {
            GridCell cell;
            cell.collective_size = c.at("n").get<int>();
            cell.percent_tasks = c.at("pct").get<int>();
            cell.composition.service_types = c.at("service_types").get<int>();
            cell.composition.services_per_robot = c.at("services_per_robot").get<int>();
            cfg.cells.push_back(cell);
        }
    } else {
        cfg.cells = desk_grid();
    }
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("mode")) {
        const std::string m = j.at("mode").get<std::string>();
        if (m == "sync") cfg.mode = simnet::EngineMode::Sync;
        else if (m == "async") cfg.mode = simnet::EngineMode::Async;
        else throw std::invalid_argument("config: mode must be sync or async");
    }
    if (j.contains("latency_us")) {
        cfg.net.latency_lo_us = j.at("latency_us").at(0).get<std::int64_t>();
        cfg.net.latency_hi_us = j.at("latency_us").at(1).get<std::int64_t>();
    }
    if (j.contains("loss")) cfg.net.loss = j.at("loss").get<double>();
    if (j.contains("counting")) {
        const std::string c = j.at("counting").get<std::string>();
        if (c == "once_per_send") cfg.counting = simnet::CountingMode::OncePerSend;
        else if (c == "per_receiver") cfg.counting = simnet::CountingMode::PerReceiver;
        else throw std::invalid_argument("config: counting must be once_per_send or per_receiver");
    }
    if (j.contains("grape_cap")) cfg.grape_cap = j.at("grape_cap").get<bool>();
    if (j.contains("quiescence_rounds")) cfg.quiescence_rounds = j.at("quiescence_rounds").get<int>();
    if (j.contains("sda_epsilon")) cfg.sda_epsilon = j.at("sda_epsilon").get<int>();
    if (j.contains("sda_round_window")) cfg.sda_round_window = j.at("sda_round_window").get<int>();
    if (j.contains("sync_iteration_cap"))
        cfg.sync_iteration_cap = j.at("sync_iteration_cap").get<std::int64_t>();
    if (j.contains("sim_time_limit_us"))
        cfg.sim_time_limit_us = j.at("sim_time_limit_us").get<std::int64_t>();
    if (j.contains("wall_limit_ms")) cfg.wall_limit_ms = j.at("wall_limit_ms").get<std::int64_t>();
    if (j.contains("seed")) cfg.base_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    if (j.contains("strict")) cfg.strict = j.at("strict").get<bool>();
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (algorithms.empty()) throw std::invalid_argument("config: no algorithms selected");
    if (cells.empty()) throw std::invalid_argument("config: no grid cells");
    for (const GridCell& cell : cells) validate_cell(cell);
    if (net.latency_lo_us < 0 || net.latency_hi_us < net.latency_lo_us)
        throw std::invalid_argument("config: bad latency range");
    if (net.loss < 0.0 || net.loss >= 1.0)
        throw std::invalid_argument("config: loss must be in [0, 1)");
    if (sda_epsilon < 1) throw std::invalid_argument("config: sda epsilon must be >= 1");
}

std::uint64_t instance_seed_for(std::uint64_t base, const GridCell& cell, int trial) {
    return derive_seed(base, {static_cast<std::uint64_t>(cell.collective_size),
                              static_cast<std::uint64_t>(cell.percent_tasks),
                              static_cast<std::uint64_t>(cell.composition.service_types),
                              static_cast<std::uint64_t>(cell.composition.services_per_robot),
                              static_cast<std::uint64_t>(trial)});
}

std::uint64_t engine_seed_for(std::uint64_t instance_seed, Algorithm a,
                              simnet::EngineMode mode) {
    return derive_seed(instance_seed, {static_cast<std::uint64_t>(a) + 101,
                                       mode == simnet::EngineMode::Async ? 2ULL : 1ULL});
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config) {
    config.validate();
    const std::size_t algs = config.algorithms.size();
    const std::size_t units = config.cells.size() * static_cast<std::size_t>(config.trials);
    std::vector<TrialRecord> records(units * algs);

    TrialSpec base_spec;
    base_spec.mode = config.mode;
    base_spec.counting = config.counting;
    base_spec.net = config.net;
    base_spec.grape_cap = config.grape_cap;
    base_spec.quiescence_rounds = config.quiescence_rounds;
    base_spec.sda_epsilon = config.sda_epsilon;
    base_spec.sda_round_window = config.sda_round_window;
    base_spec.sync_iteration_cap = config.sync_iteration_cap;
    base_spec.sim_time_limit_us = config.sim_time_limit_us;
    base_spec.wall_limit_ms = config.wall_limit_ms;

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t unit = next.fetch_add(1);
            if (unit >= units) return;
            const std::size_t ci = unit / static_cast<std::size_t>(config.trials);
            const int trial = static_cast<int>(unit % static_cast<std::size_t>(config.trials));
            GridCell cell = config.cells[ci];
            cell.seed = instance_seed_for(config.base_seed, cell, trial);
            const GeneratedInstance gen = generate(cell);
            const std::uint64_t hash = gen.instance.content_hash();
            for (std::size_t ai = 0; ai < algs; ++ai) {
                TrialSpec spec = base_spec;
                spec.algorithm = config.algorithms[ai];
                TrialRecord& rec = records[unit * algs + ai];
                rec.cell = cell;
                rec.trial = trial;
                rec.algorithm = spec.algorithm;
                rec.instance_hash = hash;
                rec.result = run_trial(gen.instance, spec,
                                       engine_seed_for(cell.seed, spec.algorithm, config.mode));
            }
        }
    };

    int jobs = config.jobs > 0 ? config.jobs
                               : static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    jobs = std::min<int>(jobs, static_cast<int>(units));
    std::vector<std::thread> pool;
    for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return records;
}

namespace {

const char* kRecordHeader =
    "n,percent_tasks,service_types,services_per_robot,trial,algorithm,instance_hash,"
    "percent_utility,iterations,sim_time_us,bytes_total,bytes_grape_belief,bytes_swap_request,"
    "bytes_swap_reply,bytes_sda_wage,bytes_sda_bid,bytes_sda_award,stable_nash,stable_pairwise,"
    "timeout";

std::string format_record(const TrialRecord& r) {
    char buf[512];
    const auto& b = r.result.bytes.bytes;
    std::snprintf(buf, sizeof(buf),
                  "%d,%d,%d,%d,%d,%s,%016llx,%.6f,%lld,%lld,%llu,%llu,%llu,%llu,%llu,%llu,%llu,"
                  "%d,%d,%d",
                  r.cell.collective_size, r.cell.percent_tasks, r.cell.composition.service_types,
                  r.cell.composition.services_per_robot, r.trial,
                  algorithm_name(r.algorithm).c_str(),
                  static_cast<unsigned long long>(r.instance_hash), r.result.percent,
                  static_cast<long long>(r.result.iterations),
                  static_cast<long long>(r.result.sim_time_us),
                  static_cast<unsigned long long>(r.result.bytes.total),
                  static_cast<unsigned long long>(b[0]), static_cast<unsigned long long>(b[1]),
                  static_cast<unsigned long long>(b[2]), static_cast<unsigned long long>(b[3]),
                  static_cast<unsigned long long>(b[4]), static_cast<unsigned long long>(b[5]),
                  r.result.stable_nash ? 1 : 0, r.result.stable_pairwise ? 1 : 0,
                  r.result.timeout ? 1 : 0);
    return buf;
}

}  // namespace

void write_records_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
    out << kRecordHeader << "\n";
    for (const TrialRecord& r : records) out << format_record(r) << "\n";
}

void write_timings_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
    out << "n,percent_tasks,service_types,services_per_robot,trial,algorithm,wall_ms\n";
    for (const TrialRecord& r : records)
        out << r.cell.collective_size << ',' << r.cell.percent_tasks << ','
            << r.cell.composition.service_types << ',' << r.cell.composition.services_per_robot
            << ',' << r.trial << ',' << algorithm_name(r.algorithm) << ',' << r.result.wall_ms
            << "\n";
}

std::vector<TrialRecord> read_records_csv(std::istream& in) {
    std::vector<TrialRecord> records;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("records csv: empty input");
    if (line != kRecordHeader) throw std::invalid_argument("records csv: unexpected header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (f.size() != 20) throw std::invalid_argument("records csv: malformed row");
        TrialRecord r;
        r.cell.collective_size = std::stoi(f[0]);
        r.cell.percent_tasks = std::stoi(f[1]);
        r.cell.composition.service_types = std::stoi(f[2]);
        r.cell.composition.services_per_robot = std::stoi(f[3]);
        r.trial = std::stoi(f[4]);
        r.algorithm = algorithm_from_name(f[5]);
        r.instance_hash = std::stoull(f[6], nullptr, 16);
        r.result.percent = std::stod(f[7]);
        r.result.iterations = std::stoll(f[8]);
        r.result.sim_time_us = std::stoll(f[9]);
        r.result.bytes.total = std::stoull(f[10]);
        for (int c = 0; c < kMessageClassCount; ++c)
            r.result.bytes.bytes[static_cast<std::size_t>(c)] =
                std::stoull(f[static_cast<std::size_t>(11 + c)]);
        r.result.stable_nash = f[17] == "1";
        r.result.stable_pairwise = f[18] == "1";
        r.result.timeout = f[19] == "1";
        records.push_back(std::move(r));
    }
    return records;
}

namespace {

double lower_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
}

nlohmann::ordered_json stat_block(const std::vector<double>& values) {
    nlohmann::ordered_json j;
    j["median"] = lower_median(values);
    j["min"] = *std::min_element(values.begin(), values.end());
    j["max"] = *std::max_element(values.begin(), values.end());
    return j;
}

}  // namespace

nlohmann::ordered_json summarize(const std::vector<TrialRecord>& records) {
    struct Key {
        GridCell cell;
        Algorithm algorithm;
    };
    auto same = [](const Key& k, const TrialRecord& r) {
        return k.cell.collective_size == r.cell.collective_size &&
               k.cell.percent_tasks == r.cell.percent_tasks &&
               k.cell.composition == r.cell.composition && k.algorithm == r.algorithm;
    };
    std::vector<Key> keys;
    std::vector<std::vector<const TrialRecord*>> groups;
    for (const TrialRecord& r : records) {
        std::size_t g = 0;
        for (; g < keys.size(); ++g)
            if (same(keys[g], r)) break;
        if (g == keys.size()) {
            keys.push_back(Key{r.cell, r.algorithm});
            groups.emplace_back();
        }
        groups[g].push_back(&r);
    }

    nlohmann::ordered_json out;
    out["cells"] = nlohmann::ordered_json::array();
    for (std::size_t g = 0; g < keys.size(); ++g) {
        nlohmann::ordered_json j;
        j["n"] = keys[g].cell.collective_size;
        j["pct"] = keys[g].cell.percent_tasks;
        j["service_types"] = keys[g].cell.composition.service_types;
        j["services_per_robot"] = keys[g].cell.composition.services_per_robot;
        j["algorithm"] = algorithm_name(keys[g].algorithm);
        j["trials"] = groups[g].size();
        std::vector<double> percent, iters, sim, bytes;
        int timeouts = 0;
        bool nash_all = true, pair_all = true;
        for (const TrialRecord* r : groups[g]) {
            percent.push_back(r->result.percent);
            iters.push_back(static_cast<double>(r->result.iterations));
            sim.push_back(static_cast<double>(r->result.sim_time_us));
            bytes.push_back(static_cast<double>(r->result.bytes.total));
            timeouts += r->result.timeout ? 1 : 0;
            nash_all = nash_all && r->result.stable_nash;
            pair_all = pair_all && r->result.stable_pairwise;
        }
        j["percent_utility"] = stat_block(percent);
        j["iterations"] = stat_block(iters);
        j["sim_time_us"] = stat_block(sim);
        j["bytes_total"] = stat_block(bytes);
        j["timeouts"] = timeouts;
        j["stable_nash_all"] = nash_all;
        j["stable_pairwise_all"] = pair_all;
        out["cells"].push_back(std::move(j));
    }
    return out;
}

int run_experiment_to_dir(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    const std::vector<TrialRecord> records = run_experiment(config);

    {
        std::ofstream out(fs::path(config.out_dir) / "records.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write records.csv under " + config.out_dir);
        write_records_csv(records, out);
    }
    {
        std::ofstream out(fs::path(config.out_dir) / "timings.csv", std::ios::binary);
        write_timings_csv(records, out);
    }
    {
        std::ofstream out(fs::path(config.out_dir) / "summary.json", std::ios::binary);
        out << summarize(records).dump(2) << "\n";
    }

    bool any_timeout = false;
    for (const TrialRecord& r : records) any_timeout = any_timeout || r.result.timeout;
    if (any_timeout) std::cerr << "warning: some trials hit a time limit\n";
    return (config.strict && any_timeout) ? 3 : 0;
}

}  // namespace grapes
