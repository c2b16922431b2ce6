#pragma once

#include <cstdint>
#include <optional>

#include "grapes/messages.hpp"
#include "grapes/reward.hpp"
#include "grapes/simnet.hpp"
#include "grapes/types.hpp"

namespace grapes {

// Identity of one belief version. Precedence over these triples acts as the
// distributed mutex: exactly one version survives any pairwise comparison.
struct BeliefVersion {
    std::uint32_t r = 0;
    std::int64_t time_us = 0;
    std::int32_t origin = 0;

    friend bool operator==(const BeliefVersion&, const BeliefVersion&) = default;
};

// true when the incoming version takes precedence: updated more times, or as
// often but more recently, or tied on both with a lower origin id
bool supersedes(const BeliefVersion& incoming, const BeliefVersion& local);

// some task is under-filled for some service AND some robot sits on the void
// task; the trigger condition for the pairwise phase
bool needs_pairwise(const Partition& belief, const ProblemInstance& instance);

enum class GrapePhase { Nash, Pairwise };

struct GrapeConfig {
    bool cap = false;       // skip slots already holding their required count
    bool pairwise = false;  // run the pairwise repair phase after quiescence
    int quiescence_rounds = 3;
    int swap_retry_acts = 6;  // activations before an unanswered request is retried
};

class GrapeAgent final : public simnet::Agent {
public:
    GrapeAgent(const ProblemInstance& instance, int robot_id, const GrapeConfig& cfg,
               std::uint64_t* world_version);

    void activate(simnet::Outbox& out, std::int64_t now_us) override;
    void handle(const Payload& msg, int from, simnet::Outbox& out, std::int64_t now_us) override;
    bool idle() const override { return terminated_; }
    bool take_reactivation() override { return std::exchange(reactivate_, false); }

    // measurement surface (engine-side only)
    BeliefVersion version() const { return {r_, time_, origin_}; }
    const Partition& belief() const { return belief_; }
    GrapePhase phase() const { return phase_; }
    int quiescent_count() const { return quiescent_; }
    std::uint64_t protocol_drops() const { return drops_; }
    bool terminated() const { return terminated_; }

private:
    const Robot& self() const { return instance_->robots[static_cast<std::size_t>(id_)]; }
    void bump(std::int64_t now_us);
    bool slot_open(const Assignment& slot) const;
    bool try_send_swap(simnet::Outbox& out);

    const ProblemInstance* instance_;
    GrapeConfig cfg_;
    std::int32_t id_;

    std::uint32_t r_ = 0;
    std::int64_t time_ = 0;
    std::int32_t origin_;
    Partition belief_;

    GrapePhase phase_ = GrapePhase::Nash;
    int quiescent_ = 0;
    bool terminated_ = false;
    bool reactivate_ = false;

    std::optional<SwapRequest> pending_;
    int pending_age_ = 0;

    std::uint64_t drops_ = 0;
    std::uint64_t* world_version_;
};

}  // namespace grapes
