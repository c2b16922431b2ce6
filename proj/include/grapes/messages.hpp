#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "grapes/types.hpp"

namespace grapes {

// Belief broadcast. `origin` identifies the robot that produced this belief
// version; rebroadcasts keep it, so the (r, time, origin) precedence order
// stays consistent across hops.
struct GrapeMessage {
    std::int32_t origin = 0;
    std::uint32_t r = 0;
    std::int64_t time_us = 0;
    Partition partition;
};

struct SwapRequest {
    std::int32_t requester = 0;
    std::int32_t target = 0;
    Assignment requested;  // the slot the requester wants the target to vacate
    Assignment unmet;      // the slot the target would move to
};

struct SwapReply {
    std::int32_t responder = 0;
    std::int32_t requester = 0;
    bool accepted = false;
    Assignment requested;
    Assignment unmet;
};

// Wage snapshot from one service agent for the robots it homes.
struct WageUpdate {
    std::int32_t service_agent = 0;
    std::vector<std::pair<std::int32_t, std::int32_t>> wages;  // (robot, wage)
};

struct BidItem {
    std::int32_t robot = 0;
    std::int32_t service = 0;
    std::int32_t wage = 0;  // wage the bid is priced at
};

struct BidMessage {
    std::int32_t task = 0;
    std::vector<BidItem> bundle;
    long long total = 0;
};

struct AwardMessage {
    std::int32_t task = 0;
    std::vector<std::pair<std::int32_t, std::int32_t>> granted;  // (robot, service)
};

using Payload =
    std::variant<GrapeMessage, SwapRequest, SwapReply, WageUpdate, BidMessage, AwardMessage>;

enum class MessageClass : int {
    GrapeBelief = 0,
    SwapRequest = 1,
    SwapReply = 2,
    SdaWage = 3,
    SdaBid = 4,
    SdaAward = 5,
};
constexpr int kMessageClassCount = 6;
const char* message_class_name(MessageClass c);

MessageClass message_class(const Payload& p);

// Wire sizes used for communication accounting:
//   belief: 4B origin + 4B counter + 8B time + 4B per robot entry
//   swap request/reply: 24B fixed
//   wage update: 4B + 4B per homed robot
//   bid: 8B + 6B per bundle item
//   award: 8B + 4B per granted robot
std::size_t encoded_size(const Payload& p);

// Bit-exact belief encoding: little-endian header, then one 4-byte entry per
// robot holding a 3-byte task id (0xFFFFFF for the void task) and a 1-byte
// service index.
std::vector<std::uint8_t> encode(const GrapeMessage& m);
GrapeMessage decode_grape_message(const std::vector<std::uint8_t>& bytes);

}  // namespace grapes
