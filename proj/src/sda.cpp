#include "grapes/sda.hpp"

#include <algorithm>
#include <stdexcept>

namespace grapes {

WageBoard init_auction(const ProblemInstance& instance, int epsilon_d) {
    if (instance.tasks.empty())
        throw std::invalid_argument("init_auction: no tasks to sell services to");
    if (epsilon_d < 1) throw std::invalid_argument("init_auction: epsilon must be >= 1");
    int u_max = 0;
    for (const Task& t : instance.tasks) u_max = std::max(u_max, t.utility);
    WageBoard board;
    board.epsilon = epsilon_d;
    const std::size_t n = static_cast<std::size_t>(instance.robot_count());
    board.wage.assign(n, u_max + epsilon_d);
    board.purchased.assign(n, false);
    board.owner_task.assign(n, -1);
    board.sold_service.assign(n, -1);
    return board;
}

void decrement_round(WageBoard& board) {
    int top = -1;
    for (int i = 0; i < board.robot_count(); ++i)
        if (!board.purchased[static_cast<std::size_t>(i)])
            top = std::max(top, board.wage[static_cast<std::size_t>(i)]);
    if (top <= 0) return;
    for (int i = 0; i < board.robot_count(); ++i) {
        auto idx = static_cast<std::size_t>(i);
        if (!board.purchased[idx] && board.wage[idx] == top)
            board.wage[idx] = std::max(0, top - board.epsilon);
    }
}

std::optional<BidMessage> compute_bid(const Task& task, const WageBoard& board,
                                      const ProblemInstance& instance) {
    // what the task already owns, and what it has paid
    std::vector<int> have(static_cast<std::size_t>(instance.service_type_count), 0);
    long long committed = 0;
    for (int i = 0; i < board.robot_count(); ++i) {
        auto idx = static_cast<std::size_t>(i);
        if (board.purchased[idx] && board.owner_task[idx] == task.id) {
            ++have[static_cast<std::size_t>(board.sold_service[idx])];
            committed += board.wage[idx];
        }
    }

    std::vector<int> slot_service;  // one row per missing robot
    for (int s = 0; s < instance.service_type_count; ++s) {
        const int missing = task.requirement[static_cast<std::size_t>(s)] -
                            have[static_cast<std::size_t>(s)];
        for (int k = 0; k < missing; ++k) slot_service.push_back(s);
    }
    if (slot_service.empty()) return std::nullopt;  // fully filled

    std::vector<int> candidates;
    for (int i = 0; i < board.robot_count(); ++i)
        if (!board.purchased[static_cast<std::size_t>(i)]) candidates.push_back(i);
    if (candidates.size() < slot_service.size()) return std::nullopt;

    std::vector<std::vector<long long>> cost(
        slot_service.size(), std::vector<long long>(candidates.size(), kForbiddenEdge));
    for (std::size_t r = 0; r < slot_service.size(); ++r)
        for (std::size_t c = 0; c < candidates.size(); ++c)
            if (instance.robots[static_cast<std::size_t>(candidates[c])].can_perform(
                    slot_service[r]))
                cost[r][c] = board.wage[static_cast<std::size_t>(candidates[c])];

    auto matched = min_cost_assignment(cost);
    if (!matched) return std::nullopt;
    const long long budget = static_cast<long long>(task.utility) - committed;
    if (matched->total > budget) return std::nullopt;

    BidMessage bid;
    bid.task = task.id;
    bid.total = matched->total;
    for (std::size_t r = 0; r < slot_service.size(); ++r) {
        const int robot = candidates[static_cast<std::size_t>(matched->col_of_row[r])];
        bid.bundle.push_back(BidItem{robot, slot_service[r],
                                     board.wage[static_cast<std::size_t>(robot)]});
    }
    return bid;
}

void resolve_round(const std::vector<BidMessage>& bids, WageBoard& board) {
    std::vector<const BidMessage*> order;
    order.reserve(bids.size());
    for (const BidMessage& b : bids) order.push_back(&b);
    std::sort(order.begin(), order.end(),
              [](const BidMessage* a, const BidMessage* b) { return a->task < b->task; });

    for (const BidMessage* bid : order) {
        bool valid = true;
        long long current = 0;
        for (const BidItem& item : bid->bundle) {
            auto idx = static_cast<std::size_t>(item.robot);
            if (board.purchased[idx]) {
                valid = false;
                break;
            }
            current += board.wage[idx];
        }
        if (!valid || bid->total < current) continue;
        for (const BidItem& item : bid->bundle) {
            auto idx = static_cast<std::size_t>(item.robot);
            board.purchased[idx] = true;
            board.owner_task[idx] = bid->task;
            board.sold_service[idx] = item.service;
        }
    }
}

bool auction_finished(const WageBoard& board, const ProblemInstance& instance) {
    bool all_purchased = true;
    int top = 0;
    for (int i = 0; i < board.robot_count(); ++i) {
        auto idx = static_cast<std::size_t>(i);
        if (!board.purchased[idx]) {
            all_purchased = false;
            top = std::max(top, board.wage[idx]);
        }
    }
    if (all_purchased) return true;
    if (top > 0) return false;
    for (const Task& t : instance.tasks)
        if (compute_bid(t, board, instance)) return false;
    return true;
}

Partition board_partition(const WageBoard& board) {
    Partition p = make_void_partition(board.robot_count());
    for (int i = 0; i < board.robot_count(); ++i) {
        auto idx = static_cast<std::size_t>(i);
        if (board.purchased[idx])
            p.of(i) = Assignment{board.owner_task[idx], board.sold_service[idx]};
    }
    return p;
}

int home_service(const Robot& robot) {
    for (int s = 0; s < static_cast<int>(robot.capabilities.size()); ++s)
        if (robot.capabilities[static_cast<std::size_t>(s)] != 0) return s;
    throw std::invalid_argument("home_service: robot with no capability");
}

SdaServiceAgent::SdaServiceAgent(const ProblemInstance& instance, int service, int epsilon,
                                 std::uint64_t* world_version)
    : instance_(&instance), service_(service), epsilon_(epsilon), world_version_(world_version) {
    int u_max = 0;
    for (const Task& t : instance.tasks) u_max = std::max(u_max, t.utility);
    for (const Robot& r : instance.robots)
        if (home_service(r) == service_) book_.push_back(Entry{r.id, u_max + epsilon_, false, -1, -1});
}

bool SdaServiceAgent::idle() const {
    for (const Entry& e : book_)
        if (!e.purchased && e.wage > 0) return false;
    return !dirty_;
}

void SdaServiceAgent::activate(simnet::Outbox& out, std::int64_t /*now_us*/) {
    // one wage decrement per epoch; unpurchased robots here share one level
    int top = -1;
    for (const Entry& e : book_)
        if (!e.purchased) top = std::max(top, e.wage);
    if (top > 0) {
        for (Entry& e : book_)
            if (!e.purchased && e.wage == top) e.wage = std::max(0, top - epsilon_);
        dirty_ = true;
        if (world_version_) ++*world_version_;
    }
    if (dirty_) {
        WageUpdate update;
        update.service_agent = service_;
        for (const Entry& e : book_) update.wages.emplace_back(e.robot, e.wage);
        out.broadcast(std::move(update));
        dirty_ = false;
    }
}

void SdaServiceAgent::handle(const Payload& msg, int /*from*/, simnet::Outbox& out,
                             std::int64_t /*now_us*/) {
    const auto* bid = std::get_if<BidMessage>(&msg);
    if (!bid) return;
    AwardMessage award;
    award.task = bid->task;
    for (const BidItem& item : bid->bundle) {
        auto it = std::find_if(book_.begin(), book_.end(),
                               [&](const Entry& e) { return e.robot == item.robot; });
        if (it == book_.end()) continue;   // homed elsewhere
        if (it->purchased) continue;       // already sold; the bid was stale
        if (item.wage < it->wage) continue;  // offered below the asking wage
        it->purchased = true;
        it->owner_task = bid->task;
        it->sold_service = item.service;
        award.granted.emplace_back(item.robot, item.service);
    }
    if (!award.granted.empty()) {
        dirty_ = true;
        if (world_version_) ++*world_version_;
        out.broadcast(std::move(award));
    }
}

SdaTaskAgent::SdaTaskAgent(const ProblemInstance& instance, int task, int epsilon,
                           int pending_timeout_acts, std::uint64_t* world_version)
    : instance_(&instance),
      task_(task),
      pending_timeout_acts_(pending_timeout_acts),
      view_(init_auction(instance, epsilon)),
      world_version_(world_version) {}

void SdaTaskAgent::refresh_filled() {
    std::vector<int> have(static_cast<std::size_t>(instance_->service_type_count), 0);
    for (int i = 0; i < view_.robot_count(); ++i) {
        auto idx = static_cast<std::size_t>(i);
        if (view_.purchased[idx] && view_.owner_task[idx] == task_)
            ++have[static_cast<std::size_t>(view_.sold_service[idx])];
    }
    const Task& t = instance_->tasks[static_cast<std::size_t>(task_)];
    filled_ = true;
    for (int s = 0; s < instance_->service_type_count && filled_; ++s)
        filled_ = have[static_cast<std::size_t>(s)] >= t.requirement[static_cast<std::size_t>(s)];
}

void SdaTaskAgent::activate(simnet::Outbox& out, std::int64_t /*now_us*/) {
    if (filled_) return;
    if (!awaiting_.empty()) {
        if (++pending_age_ <= pending_timeout_acts_) return;
        // unanswered long enough: assume the bid died and price anew
        awaiting_.clear();
        view_changed_ = true;
    }
    if (!view_changed_) return;
    view_changed_ = false;
    auto bid = compute_bid(instance_->tasks[static_cast<std::size_t>(task_)], view_, *instance_);
    if (!bid) return;
    for (const BidItem& item : bid->bundle) awaiting_.push_back(item.robot);
    pending_age_ = 0;
    out.broadcast(std::move(*bid));
}

void SdaTaskAgent::handle(const Payload& msg, int /*from*/, simnet::Outbox& /*out*/,
                          std::int64_t /*now_us*/) {
    if (const auto* update = std::get_if<WageUpdate>(&msg)) {
        for (const auto& [robot, wage] : update->wages) {
            auto idx = static_cast<std::size_t>(robot);
            if (view_.wage[idx] != wage) {
                view_.wage[idx] = wage;
                view_changed_ = true;
            }
        }
        if (view_changed_ && !filled_) reactivate_ = true;
        return;
    }
    if (const auto* award = std::get_if<AwardMessage>(&msg)) {
        for (const auto& [robot, service] : award->granted) {
            auto idx = static_cast<std::size_t>(robot);
            view_.purchased[idx] = true;
            view_.owner_task[idx] = award->task;
            view_.sold_service[idx] = service;
            std::erase(awaiting_, robot);
        }
        view_changed_ = true;
        if (award->task == task_) refresh_filled();
        if (!filled_) reactivate_ = true;
        return;
    }
}

}  // namespace grapes
