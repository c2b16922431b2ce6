#include "grapes/messages.hpp"

#include <stdexcept>

namespace grapes {

const char* message_class_name(MessageClass c) {
    switch (c) {
        case MessageClass::GrapeBelief: return "grape_belief";
        case MessageClass::SwapRequest: return "swap_request";
        case MessageClass::SwapReply: return "swap_reply";
        case MessageClass::SdaWage: return "sda_wage";
        case MessageClass::SdaBid: return "sda_bid";
        case MessageClass::SdaAward: return "sda_award";
    }
    return "unknown";
}

MessageClass message_class(const Payload& p) {
    return static_cast<MessageClass>(p.index());
}

std::size_t encoded_size(const Payload& p) {
    struct Sizer {
        std::size_t operator()(const GrapeMessage& m) const {
            return 16 + 4 * static_cast<std::size_t>(m.partition.size());
        }
        std::size_t operator()(const SwapRequest&) const { return 24; }
        std::size_t operator()(const SwapReply&) const { return 24; }
        std::size_t operator()(const WageUpdate& m) const { return 4 + 4 * m.wages.size(); }
        std::size_t operator()(const BidMessage& m) const { return 8 + 6 * m.bundle.size(); }
        std::size_t operator()(const AwardMessage& m) const { return 8 + 4 * m.granted.size(); }
    };
    return std::visit(Sizer{}, p);
}

namespace {

constexpr std::uint32_t kVoidWire = 0xFFFFFF;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t at) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[at + static_cast<std::size_t>(b)]) << (8 * b);
    return v;
}

std::uint64_t get_u64(const std::vector<std::uint8_t>& in, std::size_t at) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(in[at + static_cast<std::size_t>(b)]) << (8 * b);
    return v;
}

}  // namespace

std::vector<std::uint8_t> encode(const GrapeMessage& m) {
    std::vector<std::uint8_t> out;
    out.reserve(16 + 4 * static_cast<std::size_t>(m.partition.size()));
    put_u32(out, static_cast<std::uint32_t>(m.origin));
    put_u32(out, m.r);
    put_u64(out, static_cast<std::uint64_t>(m.time_us));
    for (const Assignment& a : m.partition.assignments) {
        std::uint32_t task = a.is_void() ? kVoidWire : static_cast<std::uint32_t>(a.task);
        if (task > kVoidWire) throw std::invalid_argument("encode: task id exceeds 3 bytes");
        out.push_back(static_cast<std::uint8_t>(task));
        out.push_back(static_cast<std::uint8_t>(task >> 8));
        out.push_back(static_cast<std::uint8_t>(task >> 16));
        out.push_back(a.is_void() ? 0 : static_cast<std::uint8_t>(a.service));
    }
    return out;
}

GrapeMessage decode_grape_message(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 16 || (bytes.size() - 16) % 4 != 0)
        throw std::invalid_argument("decode: malformed belief message");
    GrapeMessage m;
    m.origin = static_cast<std::int32_t>(get_u32(bytes, 0));
    m.r = get_u32(bytes, 4);
    m.time_us = static_cast<std::int64_t>(get_u64(bytes, 8));
    const std::size_t n = (bytes.size() - 16) / 4;
    m.partition.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t at = 16 + 4 * i;
        const std::uint32_t task = static_cast<std::uint32_t>(bytes[at]) |
                                   (static_cast<std::uint32_t>(bytes[at + 1]) << 8) |
                                   (static_cast<std::uint32_t>(bytes[at + 2]) << 16);
        if (task == kVoidWire) {
            m.partition.assignments[i] = Assignment{};
        } else {
            m.partition.assignments[i] =
                Assignment{static_cast<std::int32_t>(task), bytes[at + 3]};
        }
    }
    return m;
}

}  // namespace grapes
