#ifndef SDSIM_NODE_ENGINE_HPP
#define SDSIM_NODE_ENGINE_HPP

#include <cstdint>
#include <map>
#include <tuple>
#include <variant>
#include <vector>

#include "sdsim/message.hpp"
#include "sdsim/types.hpp"

namespace sdsim {

// Protocol timing and limits shared by every node of a scenario.
struct EngineParams {
    Duration broadcast_period{6000};
    std::uint32_t sreq_ttl = 16;
    Duration service_lifetime{18000};
    std::size_t max_ust_entries = 64;
    Duration dup_cache_ttl{12000};
    bool broadcast_enabled = true;
};

using ServiceKey = std::tuple<NodeId, std::string, std::string>;  // provider, name, type

inline ServiceKey service_key(const ServiceEntry& s) {
    return {s.provider, s.service_name, s.service_type};
}

struct PendingDiscovery {
    ServiceQuery query;
    SimTime started{0};

    bool operator==(const PendingDiscovery&) const = default;
};

/// Everything one node knows. Keyed containers keep iteration order (and so
/// every emitted effect list) deterministic, and the routing table holds at
/// most one entry per destination by construction.
struct NodeState {
    NodeId id = 0;
    bool can_store = false;
    std::vector<ServiceEntry> own_services;
    std::map<ServiceKey, ServiceEntry> service_table;
    std::map<NodeId, RouteEntry> routing_table;
    std::uint64_t own_seq = 0;
    SimTime next_broadcast_at{0};
    std::map<RequestId, SimTime> seen_sreq;
    std::map<ErrorId, SimTime> seen_rerr;
    std::uint64_t next_request_counter = 0;
    std::uint64_t next_error_counter = 0;
    std::map<RequestId, PendingDiscovery> pending;

    bool operator==(const NodeState&) const = default;

    const RouteEntry* route_to(NodeId destination) const;
};

// ---- effects ---------------------------------------------------------------

struct Broadcast {
    Message msg;
    bool operator==(const Broadcast&) const = default;
};

struct Unicast {
    NodeId to = 0;
    Message msg;
    bool operator==(const Unicast&) const = default;
};

struct DiscoveryCompleted {
    RequestId request_id;
    NodeId provider = 0;
    std::vector<ServiceEntry> services;
    bool operator==(const DiscoveryCompleted&) const = default;
};

struct DiscoveryLocalHit {
    ServiceQuery query;
    NodeId provider = 0;
    std::vector<ServiceEntry> services;
    bool operator==(const DiscoveryLocalHit&) const = default;
};

struct TimerSet {
    SimTime at{0};
    bool operator==(const TimerSet&) const = default;
};

struct DataDelivered {
    Data msg;
    bool operator==(const DataDelivered&) const = default;
};

using Effect =
    std::variant<Broadcast, Unicast, DiscoveryCompleted, DiscoveryLocalHit, TimerSet, DataDelivered>;
using Effects = std::vector<Effect>;

// ---- transitions -------------------------------------------------------------
//
// Each transition updates `state` in place and returns the effects it emits.
// No transition reads a clock or a random source; `now` and any jitter are
// inputs, so the same (state, event, now, jitter) always yields the same
// result.

NodeState make_node(NodeId id, bool can_store, std::vector<ServiceEntry> own_services,
                    SimTime first_broadcast_at);

/// Periodic block: drop temporary routes, clean caches and expired services,
/// advertise, bump own_seq and rearm the timer.
Effects on_timer(NodeState& state, const EngineParams& params, SimTime now);

/// `jitter` must lie in [broadcast_period/2, broadcast_period].
Effects on_ust(NodeState& state, const EngineParams& params, const Ust& msg, NodeId from,
               SimTime now, Duration jitter);

Effects begin_discovery(NodeState& state, const EngineParams& params, const ServiceQuery& query,
                        SimTime now);

Effects on_sreq(NodeState& state, const EngineParams& params, const Sreq& msg, NodeId from,
                SimTime now);

Effects on_srep(NodeState& state, const EngineParams& params, const Srep& msg, NodeId from,
                SimTime now);

Effects on_link_down(NodeState& state, const EngineParams& params, NodeId lost_neighbor,
                     SimTime now);

Effects on_rerr(NodeState& state, const EngineParams& params, const Rerr& msg, NodeId from,
                SimTime now);

Effects forward_data(NodeState& state, const EngineParams& params, const Data& msg, SimTime now);

/// Freshness rule. The candidate replaces the existing entry for its
/// destination iff there is none, its sequence number is higher, it is
/// shorter at equal sequence number, or it is permanent while the existing
/// entry is temporary. Precursor sets merge on replacement.
/// Returns true when the table changed.
bool route_upsert(std::map<NodeId, RouteEntry>& table, const RouteEntry& candidate);

}  // namespace sdsim

#endif  // SDSIM_NODE_ENGINE_HPP
