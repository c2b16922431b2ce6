#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grapes/matching.hpp"
#include "grapes/messages.hpp"
#include "grapes/simnet.hpp"
#include "grapes/types.hpp"

namespace grapes {

// Global auction state: one wage per robot, descending over rounds. Purchased
// robots keep their wage frozen and never return to the market.
struct WageBoard {
    int epsilon = 1;
    std::vector<int> wage;
    std::vector<bool> purchased;
    std::vector<std::int32_t> owner_task;    // -1 while unsold
    std::vector<std::int32_t> sold_service;  // -1 while unsold

    int robot_count() const { return static_cast<int>(wage.size()); }
};

// every wage starts at u_max + epsilon_d; throws on an empty task set
WageBoard init_auction(const ProblemInstance& instance, int epsilon_d);

// one price step: all unpurchased robots tied at the current maximum
// unpurchased wage drop by epsilon, floored at zero
void decrement_round(WageBoard& board);

// Min-total-wage bundle over the task's unmet requirement slots, restricted
// to unpurchased capable robots. No bid when no full bundle exists or the
// cheapest one exceeds the remaining budget (utility minus committed wages).
std::optional<BidMessage> compute_bid(const Task& task, const WageBoard& board,
                                      const ProblemInstance& instance);

// processes bids in ascending task-id order; a bid is awarded only if all of
// its robots are still unpurchased and it covers their current wages
void resolve_round(const std::vector<BidMessage>& bids, WageBoard& board);

// all robots purchased, or all remaining wages zero with no task able to bid
bool auction_finished(const WageBoard& board, const ProblemInstance& instance);

// assignment implied by ownership; unsold robots sit on the void task
Partition board_partition(const WageBoard& board);

// a robot's wage lives with its home service agent: the lowest service index
// it can perform
int home_service(const Robot& robot);

// Seller side: tracks wages for the robots homed at one service type,
// decrements them once per activation epoch, and grants bids per robot.
// Grants are the linearization point, so a robot is never sold twice.
class SdaServiceAgent final : public simnet::Agent {
public:
    SdaServiceAgent(const ProblemInstance& instance, int service, int epsilon,
                    std::uint64_t* world_version);

    void activate(simnet::Outbox& out, std::int64_t now_us) override;
    void handle(const Payload& msg, int from, simnet::Outbox& out, std::int64_t now_us) override;
    bool idle() const override;

    struct Entry {
        std::int32_t robot;
        std::int32_t wage;
        bool purchased = false;
        std::int32_t owner_task = -1;
        std::int32_t sold_service = -1;
    };
    const std::vector<Entry>& book() const { return book_; }

private:
    const ProblemInstance* instance_;
    int service_;
    int epsilon_;
    std::vector<Entry> book_;
    bool dirty_ = true;  // book changed since the last wage broadcast
    std::uint64_t* world_version_;
};

// Buyer side: keeps a wage/ownership view from broadcasts and re-bids on its
// unmet slots whenever the view changes and no bid is outstanding.
class SdaTaskAgent final : public simnet::Agent {
public:
    SdaTaskAgent(const ProblemInstance& instance, int task, int epsilon, int pending_timeout_acts,
                 std::uint64_t* world_version);

    void activate(simnet::Outbox& out, std::int64_t now_us) override;
    void handle(const Payload& msg, int from, simnet::Outbox& out, std::int64_t now_us) override;
    bool idle() const override { return filled_; }
    bool take_reactivation() override { return std::exchange(reactivate_, false); }

private:
    void refresh_filled();

    const ProblemInstance* instance_;
    int task_;
    int pending_timeout_acts_;
    WageBoard view_;
    bool view_changed_ = true;
    bool filled_ = false;
    std::vector<std::int32_t> awaiting_;  // robots of the outstanding bid
    int pending_age_ = 0;
    bool reactivate_ = false;
    std::uint64_t* world_version_;
};

}  // namespace grapes
