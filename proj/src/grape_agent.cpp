#include "grapes/grape_agent.hpp"

#include <algorithm>

namespace grapes {

bool supersedes(const BeliefVersion& incoming, const BeliefVersion& local) {
    if (incoming.r != local.r) return incoming.r > local.r;
    if (incoming.time_us != local.time_us) return incoming.time_us > local.time_us;
    return incoming.origin < local.origin;
}

bool needs_pairwise(const Partition& belief, const ProblemInstance& instance) {
    bool idle = false;
    for (const Assignment& a : belief.assignments)
        if (a.is_void()) {
            idle = true;
            break;
        }
    if (!idle) return false;
    FillCounts counts(instance, belief);
    for (const Task& t : instance.tasks)
        for (int s = 0; s < instance.service_type_count; ++s)
            if (counts.at(t.id, s) < t.requirement[static_cast<std::size_t>(s)]) return true;
    return false;
}

GrapeAgent::GrapeAgent(const ProblemInstance& instance, int robot_id, const GrapeConfig& cfg,
                       std::uint64_t* world_version)
    : instance_(&instance),
      cfg_(cfg),
      id_(robot_id),
      origin_(robot_id),
      belief_(make_void_partition(instance.robot_count())),
      world_version_(world_version) {
    // the pairwise phase assumes coalitions never exceed their requirement
    if (cfg_.pairwise) cfg_.cap = true;
}

void GrapeAgent::bump(std::int64_t now_us) {
    ++r_;
    time_ = now_us;
    origin_ = id_;
    if (world_version_) ++*world_version_;
}

bool GrapeAgent::slot_open(const Assignment& slot) const {
    const int req = instance_->tasks[static_cast<std::size_t>(slot.task)]
                        .requirement[static_cast<std::size_t>(slot.service)];
    if (req == 0) return false;
    int members = 0;
    for (const Assignment& a : belief_.assignments)
        if (a.task == slot.task && a.service == slot.service) ++members;
    return members < req;
}

void GrapeAgent::activate(simnet::Outbox& out, std::int64_t now_us) {
    if (terminated_) return;

    bool moved = false;
    if (auto mv = best_move(self(), belief_, *instance_, cfg_.cap)) {
        belief_.of(id_) = Assignment{mv->task, mv->service};
        bump(now_us);
        moved = true;
        quiescent_ = 0;
    } else {
        ++quiescent_;
    }

    if (!moved) {
        if (phase_ == GrapePhase::Nash && quiescent_ >= cfg_.quiescence_rounds) {
            if (cfg_.pairwise && needs_pairwise(belief_, *instance_))
                phase_ = GrapePhase::Pairwise;
            else
                terminated_ = true;
        }
        if (phase_ == GrapePhase::Pairwise) {
            if (pending_ && ++pending_age_ > cfg_.swap_retry_acts) pending_.reset();
            if (!needs_pairwise(belief_, *instance_)) {
                if (quiescent_ >= cfg_.quiescence_rounds) terminated_ = true;
            } else if (!pending_ && belief_.of(id_).is_void()) {
                try_send_swap(out);
            }
        }
    }

    out.broadcast(GrapeMessage{origin_, r_, time_, belief_});
}

bool GrapeAgent::try_send_swap(simnet::Outbox& out) {
    FillCounts counts(*instance_, belief_);
    struct UnmetSlot {
        double reward;
        std::int32_t task;
        std::int32_t service;
    };
    std::vector<UnmetSlot> unmet;
    for (const Task& t : instance_->tasks) {
        for (int s = 0; s < instance_->service_type_count; ++s) {
            const int req = t.requirement[static_cast<std::size_t>(s)];
            if (req == 0) continue;
            const int have = counts.at(t.id, s);
            if (have >= req) continue;
            unmet.push_back({grapes_reward(req, have + 1), t.id, s});
        }
    }
    std::sort(unmet.begin(), unmet.end(), [](const UnmetSlot& a, const UnmetSlot& b) {
        if (a.reward != b.reward) return a.reward > b.reward;
        if (a.task != b.task) return a.task < b.task;
        return a.service < b.service;
    });

    // highest-reward unmet slot first; take the first one some assigned robot
    // can cover while freeing a slot this robot can perform
    for (const UnmetSlot& u : unmet) {
        for (const Robot& other : instance_->robots) {
            if (other.id == id_) continue;
            const Assignment& slot = belief_.of(other.id);
            if (slot.is_void()) continue;
            if (slot.task == u.task && slot.service == u.service) continue;
            if (!other.can_perform(u.service)) continue;
            if (!self().can_perform(slot.service)) continue;
            pending_ = SwapRequest{id_, other.id, slot, Assignment{u.task, u.service}};
            pending_age_ = 0;
            out.send(other.id, *pending_);
            return true;
        }
    }
    return false;
}

void GrapeAgent::handle(const Payload& msg, int /*from*/, simnet::Outbox& out,
                        std::int64_t now_us) {
    if (const auto* m = std::get_if<GrapeMessage>(&msg)) {
        if (m->partition.size() != instance_->robot_count()) {
            ++drops_;
            return;
        }
        if (supersedes({m->r, m->time_us, m->origin}, {r_, time_, origin_})) {
            r_ = m->r;
            time_ = m->time_us;
            origin_ = m->origin;
            belief_ = m->partition;
            if (world_version_) ++*world_version_;
            quiescent_ = 0;
            reactivate_ = true;
            terminated_ = false;
        }
        return;
    }

    if (const auto* q = std::get_if<SwapRequest>(&msg)) {
        if (q->target != id_) return;
        const Robot& requester = instance_->robots[static_cast<std::size_t>(q->requester)];
        const bool ok = !q->requested.is_void() && !(q->unmet == q->requested) &&
                        belief_.of(q->requester).is_void() &&
                        belief_.of(id_) == q->requested &&
                        self().can_perform(q->unmet.service) &&
                        requester.can_perform(q->requested.service) && slot_open(q->unmet);
        out.send(q->requester, SwapReply{id_, q->requester, ok, q->requested, q->unmet});
        return;
    }

    if (const auto* rep = std::get_if<SwapReply>(&msg)) {
        if (rep->requester != id_ || !pending_) return;
        if (rep->responder != pending_->target || !(rep->requested == pending_->requested) ||
            !(rep->unmet == pending_->unmet))
            return;  // reply for a request this agent no longer has in flight
        const SwapRequest req = *pending_;
        pending_.reset();
        pending_age_ = 0;
        if (!rep->accepted) return;
        // the belief may have moved since the request went out
        if (!belief_.of(id_).is_void()) return;
        if (!(belief_.of(req.target) == req.requested)) return;
        if (!slot_open(req.unmet)) return;
        belief_.of(id_) = req.requested;
        belief_.of(req.target) = req.unmet;
        bump(now_us);
        quiescent_ = 0;
        reactivate_ = true;
        return;
    }
}

}  // namespace grapes
