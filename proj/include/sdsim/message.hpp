#ifndef SDSIM_MESSAGE_HPP
#define SDSIM_MESSAGE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sdsim/types.hpp"

namespace sdsim {

struct AdvertEntry {
    ServiceEntry service;
    std::uint32_t hops_to_provider = 0;  // 0 when the UST sender is the provider
    std::uint64_t provider_seq = 0;

    bool operator==(const AdvertEntry&) const = default;
};

// UPDATE_SERVICE_TABLE: periodic push of a batch of adverts.
struct Ust {
    NodeId sender = 0;
    std::uint64_t sender_seq = 0;
    std::vector<AdvertEntry> adverts;

    bool operator==(const Ust&) const = default;
};

struct Sreq {
    RequestId request_id;
    NodeId origin = 0;
    ServiceQuery query;
    std::uint32_t hop_count = 0;

    bool operator==(const Sreq&) const = default;
};

struct Srep {
    RequestId request_id;
    NodeId origin = 0;
    NodeId provider = 0;
    std::vector<ServiceEntry> services;
    std::uint32_t hops_to_provider = 0;

    bool operator==(const Srep&) const = default;
};

struct Unreachable {
    NodeId destination = 0;
    std::uint64_t sequence_number = 0;

    bool operator==(const Unreachable&) const = default;
};

struct Rerr {
    ErrorId error_id;
    std::vector<Unreachable> unreachable;

    bool operator==(const Rerr&) const = default;
};

struct Data {
    NodeId source = 0;
    NodeId destination = 0;
    std::string payload_tag;

    bool operator==(const Data&) const = default;
};

using Message = std::variant<Ust, Sreq, Srep, Rerr, Data>;

/// Wire tag of a message: "UST", "SREQ", "SREP", "RERR" or "DATA".
std::string_view message_tag(const Message& msg);

/// Structural invariants independent of any scenario configuration.
/// Returns an empty string when valid, otherwise a short reason.
std::string message_violation(const Message& msg);

}  // namespace sdsim

#endif  // SDSIM_MESSAGE_HPP
