#include "grapes/simnet.hpp"

#include <chrono>
#include <queue>

namespace grapes::simnet {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

void account(ByteCounters& counters, const Payload& payload, int to, CountingMode counting,
             std::size_t agent_count) {
    std::uint64_t copies = 1;
    if (counting == CountingMode::PerReceiver && to == kBroadcast)
        copies = static_cast<std::uint64_t>(agent_count - 1);
    counters.add(message_class(payload), encoded_size(payload), copies);
}

}  // namespace

nlohmann::ordered_json RunResult::to_json() const {
    nlohmann::ordered_json j;
    j["mode"] = mode == EngineMode::Sync ? "sync" : "async";
    j["iterations"] = iterations;
    j["sim_time_us"] = sim_time_us;
    j["wall_ms"] = wall_ms;
    j["bytes_total"] = bytes.total;
    nlohmann::ordered_json by_class;
    for (int c = 0; c < kMessageClassCount; ++c)
        by_class[message_class_name(static_cast<MessageClass>(c))] =
            bytes.bytes[static_cast<std::size_t>(c)];
    j["bytes_by_class"] = std::move(by_class);
    j["percent_utility"] = percent;
    j["stable_nash"] = stable_nash;
    j["stable_pairwise"] = stable_pairwise;
    j["timeout"] = timeout;
    return j;
}

RunResult run_sync(const std::vector<Agent*>& agents, const SyncConfig& cfg,
                   const StopProbe& probe, const Snapshot& snapshot) {
    const auto start = Clock::now();
    const std::size_t n = agents.size();
    RunResult res;
    res.mode = EngineMode::Sync;

    struct Queued {
        int from;
        int to;
        std::shared_ptr<const Payload> payload;
    };
    std::vector<Queued> queue;

    std::int64_t iter = 0;
    for (;;) {
        if (auto done = probe()) {
            res.partition = *done;
            break;
        }
        if (iter >= cfg.max_iterations) {
            res.timeout = true;
            res.partition = snapshot();
            break;
        }
        ++iter;

        Outbox out;
        for (std::size_t i = 0; i < n; ++i) {
            if (agents[i]->idle()) continue;
            agents[i]->activate(out, iter);
            for (auto& [to, payload] : out.take()) {
                account(res.bytes, *payload, to, cfg.counting, n);
                queue.push_back({static_cast<int>(i), to, std::move(payload)});
            }
        }

        // deliver to exhaustion: replies produced while handling are part of
        // the same instantaneous exchange
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const Queued msg = queue[q];
            auto deliver = [&](int target) {
                Outbox reply;
                agents[static_cast<std::size_t>(target)]->handle(*msg.payload, msg.from, reply,
                                                                 iter);
                for (auto& [to, payload] : reply.take()) {
                    account(res.bytes, *payload, to, cfg.counting, n);
                    queue.push_back({target, to, std::move(payload)});
                }
            };
            if (msg.to == kBroadcast) {
                for (std::size_t t = 0; t < n; ++t)
                    if (static_cast<int>(t) != msg.from) deliver(static_cast<int>(t));
            } else {
                deliver(msg.to);
            }
        }
        queue.clear();
    }

    res.iterations = iter;
    res.sim_time_us = iter;  // logical clock: one unit per iteration
    res.wall_ms = elapsed_ms(start);
    return res;
}

RunResult run_async(const std::vector<Agent*>& agents, const AsyncConfig& cfg,
                    const StopProbe& probe, const Snapshot& snapshot) {
    const auto start = Clock::now();
    const std::size_t n = agents.size();
    RunResult res;
    res.mode = EngineMode::Async;

    const std::int64_t mean = cfg.net.mean_latency_us();
    const std::int64_t period = cfg.epoch_period_us > 0 ? cfg.epoch_period_us : mean;
    const std::int64_t round_unit = cfg.round_unit_us > 0 ? cfg.round_unit_us : mean;

    enum class Kind { Epoch, Delivery };
    struct Event {
        std::int64_t t;
        std::uint64_t seq;
        Kind kind;
        int to;
        int from;
        std::shared_ptr<const Payload> payload;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return a.t != b.t ? a.t > b.t : a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> events;

    Rng net_rng(cfg.net.seed);
    std::uint64_t seq = 0;
    std::int64_t now = 0;
    bool done = false;

    auto flush = [&](int from, Outbox& out, std::int64_t t) {
        for (auto& [to, payload] : out.take()) {
            account(res.bytes, *payload, to, cfg.counting, n);
            auto schedule = [&](int target) {
                // dropped messages still cost radio time; they were counted above
                if (cfg.net.loss > 0.0 && net_rng.bernoulli(cfg.net.loss)) return;
                std::int64_t lat = cfg.net.latency_lo_us;
                if (cfg.net.latency_hi_us > cfg.net.latency_lo_us)
                    lat += static_cast<std::int64_t>(net_rng.below(static_cast<std::uint64_t>(
                        cfg.net.latency_hi_us - cfg.net.latency_lo_us + 1)));
                events.push({t + lat, seq++, Kind::Delivery, target, from, payload});
            };
            if (to == kBroadcast) {
                for (std::size_t tgt = 0; tgt < n; ++tgt)
                    if (static_cast<int>(tgt) != from) schedule(static_cast<int>(tgt));
            } else {
                schedule(to);
            }
        }
    };

    events.push({0, seq++, Kind::Epoch, -1, -1, nullptr});

    std::uint64_t processed = 0;
    while (!events.empty()) {
        Event ev = events.top();
        events.pop();
        if (ev.t > cfg.sim_time_limit_us) {
            now = cfg.sim_time_limit_us;
            res.timeout = true;
            break;
        }
        now = ev.t;
        if ((++processed & 0x3ff) == 0 && elapsed_ms(start) > cfg.wall_limit_ms) {
            res.timeout = true;
            break;
        }

        if (ev.kind == Kind::Epoch) {
            bool any_live = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (agents[i]->idle()) continue;
                any_live = true;
                Outbox out;
                agents[i]->activate(out, now);
                flush(static_cast<int>(i), out, now);
            }
            if (any_live || !events.empty())
                events.push({now + period, seq++, Kind::Epoch, -1, -1, nullptr});
        } else {
            Agent* agent = agents[static_cast<std::size_t>(ev.to)];
            Outbox out;
            agent->handle(*ev.payload, ev.from, out, now);
            flush(ev.to, out, now);
            if (cfg.reactivity == Reactivity::Reactive && agent->take_reactivation() &&
                !agent->idle()) {
                Outbox out2;
                agent->activate(out2, now);
                flush(ev.to, out2, now);
            }
        }

        if (auto p = probe()) {
            res.partition = *p;
            done = true;
            break;
        }
    }

    if (!done && !res.timeout) {
        // queue drained without the probe firing: report whatever state the
        // collective wedged in
        if (auto p = probe()) {
            res.partition = *p;
        } else {
            res.timeout = true;
            res.partition = snapshot();
        }
    } else if (!done) {
        res.partition = snapshot();
    }

    res.sim_time_us = now;
    res.iterations = now <= 0 ? 1 : (now + round_unit - 1) / round_unit;
    res.wall_ms = elapsed_ms(start);
    return res;
}

}  // namespace grapes::simnet
