#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "grapes/messages.hpp"
#include "grapes/rng.hpp"
#include "grapes/types.hpp"

namespace grapes::simnet {

constexpr int kBroadcast = -1;

class Outbox {
public:
    void broadcast(Payload p) {
        msgs_.emplace_back(kBroadcast, std::make_shared<const Payload>(std::move(p)));
    }
    void send(int to, Payload p) {
        msgs_.emplace_back(to, std::make_shared<const Payload>(std::move(p)));
    }
    std::vector<std::pair<int, std::shared_ptr<const Payload>>> take() {
        return std::exchange(msgs_, {});
    }
    bool empty() const { return msgs_.empty(); }

private:
    std::vector<std::pair<int, std::shared_ptr<const Payload>>> msgs_;
};

// A node hosted by either engine. Engines own the schedule; agents only react:
//   activate  - one decision epoch (a sync round or an async timer tick)
//   handle    - one delivered message
// The same agent code runs under both engines; only the call pattern differs.
class Agent {
public:
    virtual ~Agent() = default;
    virtual void activate(Outbox& out, std::int64_t now_us) = 0;
    virtual void handle(const Payload& msg, int from, Outbox& out, std::int64_t now_us) = 0;
    // locally terminated: no further self-scheduled work wanted
    virtual bool idle() const { return false; }
    // one-shot flag: the last handled message warrants an immediate activation
    virtual bool take_reactivation() { return false; }
};

enum class EngineMode { Sync, Async };
enum class CountingMode { OncePerSend, PerReceiver };
enum class Reactivity { Reactive, EpochOnly };

struct NetworkConfig {
    std::int64_t latency_lo_us = 1000;
    std::int64_t latency_hi_us = 10000;
    double loss = 0.0;  // per-receiver drop probability, in [0, 1)
    std::uint64_t seed = 0;

    std::int64_t mean_latency_us() const {
        const std::int64_t mean = (latency_lo_us + latency_hi_us) / 2;
        return mean > 0 ? mean : 1;
    }
};

struct ByteCounters {
    std::array<std::uint64_t, kMessageClassCount> bytes{};
    std::array<std::uint64_t, kMessageClassCount> messages{};
    std::uint64_t total = 0;

    void add(MessageClass c, std::size_t size, std::uint64_t copies) {
        const auto i = static_cast<std::size_t>(c);
        bytes[i] += copies * size;
        messages[i] += copies;
        total += copies * size;
    }
};

struct RunResult {
    EngineMode mode = EngineMode::Sync;
    std::int64_t iterations = 0;
    std::int64_t sim_time_us = 0;
    std::int64_t wall_ms = 0;
    ByteCounters bytes;
    bool timeout = false;
    Partition partition;
    // filled by the driver once the run ends
    double percent = 0.0;
    bool stable_nash = false;
    bool stable_pairwise = false;

    nlohmann::ordered_json to_json() const;
};

// Measurement oracle: returns the final partition once the run's stability
// condition holds. It reads true agent state but never feeds anything back.
using StopProbe = std::function<std::optional<Partition>()>;
// Best-effort partition for runs cut off by a limit.
using Snapshot = std::function<Partition()>;

struct SyncConfig {
    std::int64_t max_iterations = 200000;
    CountingMode counting = CountingMode::OncePerSend;
};

struct AsyncConfig {
    NetworkConfig net;
    CountingMode counting = CountingMode::OncePerSend;
    Reactivity reactivity = Reactivity::Reactive;
    // 0 picks the mean latency
    std::int64_t epoch_period_us = 0;
    // unit for the reported decision-round count; 0 picks the mean latency
    std::int64_t round_unit_us = 0;
    std::int64_t sim_time_limit_us = 3'600'000'000LL;  // one simulated hour
    std::int64_t wall_limit_ms = 600'000;
};

// Round-based engine: every agent activates once per iteration in id order,
// then all messages are delivered losslessly before the next iteration. The
// probe runs between iterations.
RunResult run_sync(const std::vector<Agent*>& agents, const SyncConfig& cfg,
                   const StopProbe& probe, const Snapshot& snapshot);

// Discrete-event engine: per-receiver latency and loss draws, periodic epoch
// activations, and (in reactive mode) an extra activation when a delivery
// changes an agent's state. Deterministic for a fixed seed.
RunResult run_async(const std::vector<Agent*>& agents, const AsyncConfig& cfg,
                    const StopProbe& probe, const Snapshot& snapshot);

}  // namespace grapes::simnet
