#include "sdsim/node_engine.hpp"

#include <algorithm>
#include <optional>

namespace sdsim {

namespace {

struct LocalMatch {
    NodeId provider = 0;
    std::uint32_t hops = 0;
    std::vector<ServiceEntry> services;
};

const RouteEntry* permanent_route(const NodeState& state, NodeId destination) {
    const auto* r = state.route_to(destination);
    return (r != nullptr && r->status == RouteStatus::Permanent) ? r : nullptr;
}

// Closest provider able to answer `query` from this node's own knowledge.
// Learned entries only count when a permanent route to their provider
// exists; a reply must leave a usable path behind it.
std::optional<LocalMatch> find_local_match(const NodeState& state, const ServiceQuery& query,
                                           SimTime now) {
    std::optional<LocalMatch> best;
    for (const auto& s : state.own_services) {
        if (!service_matches(query, s, now)) continue;
        if (!best) best = LocalMatch{state.id, 0, {}};
        best->services.push_back(s);
    }
    if (best) return best;

    for (const auto& [key, s] : state.service_table) {
        if (!service_matches(query, s, now) || s.provider == state.id) continue;
        const auto* route = permanent_route(state, s.provider);
        if (route == nullptr) continue;
        if (!best || std::pair{route->hop_count, s.provider} < std::pair{best->hops, best->provider})
            best = LocalMatch{s.provider, route->hop_count, {}};
    }
    if (!best) return best;
    for (const auto& [key, s] : state.service_table)
        if (s.provider == best->provider && service_matches(query, s, now)) best->services.push_back(s);
    return best;
}

// Reply copies of a node's own offerings carry a finite lifetime.
ServiceEntry stamped(ServiceEntry s, const EngineParams& params, SimTime now) {
    s.expiration_time = now + params.service_lifetime;
    return s;
}

template <class Map>
void evict_older_than(Map& cache, Duration ttl, SimTime now) {
    std::erase_if(cache, [&](const auto& kv) { return now - kv.second > ttl; });
}

void notify(Effects& out, const Rerr& rerr, const std::set<NodeId>& precursors) {
    if (precursors.empty()) {
        out.push_back(Broadcast{rerr});
        return;
    }
    for (NodeId p : precursors) out.push_back(Unicast{p, rerr});
}

}  // namespace

const RouteEntry* NodeState::route_to(NodeId destination) const {
    const auto it = routing_table.find(destination);
    return it == routing_table.end() ? nullptr : &it->second;
}

NodeState make_node(NodeId id, bool can_store, std::vector<ServiceEntry> own_services,
                    SimTime first_broadcast_at) {
    NodeState state;
    state.id = id;
    state.can_store = can_store;
    for (auto& s : own_services) {
        s.provider = id;
        s.expiration_time = kForever;
    }
    state.own_services = std::move(own_services);
    state.next_broadcast_at = first_broadcast_at;
    return state;
}

bool route_upsert(std::map<NodeId, RouteEntry>& table, const RouteEntry& candidate) {
    auto it = table.find(candidate.destination);
    if (it == table.end()) {
        table.emplace(candidate.destination, candidate);
        return true;
    }
    const RouteEntry& existing = it->second;
    const bool replace =
        candidate.sequence_number > existing.sequence_number ||
        (candidate.sequence_number == existing.sequence_number &&
         candidate.hop_count < existing.hop_count) ||
        (existing.status == RouteStatus::Temporary && candidate.status == RouteStatus::Permanent);
    if (!replace) return false;

    RouteEntry merged = candidate;
    merged.precursors.insert(existing.precursors.begin(), existing.precursors.end());
    it->second = std::move(merged);
    return true;
}

Effects on_timer(NodeState& state, const EngineParams& params, SimTime now) {
    Effects out;

    std::erase_if(state.routing_table,
                  [](const auto& kv) { return kv.second.status == RouteStatus::Temporary; });
    evict_older_than(state.seen_sreq, params.dup_cache_ttl, now);
    evict_older_than(state.seen_rerr, params.dup_cache_ttl, now);
    std::erase_if(state.service_table,
                  [&](const auto& kv) { return kv.second.expiration_time < now; });

    if (params.broadcast_enabled) {
        std::vector<AdvertEntry> adverts;
        for (const auto& s : state.own_services)
            adverts.push_back({stamped(s, params, now), 0, state.own_seq});
        for (const auto& [key, s] : state.service_table) {
            const auto* route = permanent_route(state, s.provider);
            if (route == nullptr) continue;
            adverts.push_back({s, route->hop_count, route->sequence_number});
        }
        std::stable_sort(adverts.begin(), adverts.end(), [](const auto& a, const auto& b) {
            return std::pair{a.hops_to_provider, a.service.provider} <
                   std::pair{b.hops_to_provider, b.service.provider};
        });
        if (adverts.size() > params.max_ust_entries) adverts.resize(params.max_ust_entries);
        if (!adverts.empty()) out.push_back(Broadcast{Ust{state.id, state.own_seq, std::move(adverts)}});
    }

    ++state.own_seq;
    state.next_broadcast_at = now + params.broadcast_period;
    out.push_back(TimerSet{state.next_broadcast_at});
    return out;
}

Effects on_ust(NodeState& state, const EngineParams& /*params*/, const Ust& msg, NodeId from,
               SimTime now, Duration jitter) {
    Effects out;
    if (from == state.id) return out;

    if (state.can_store) {
        for (const auto& a : msg.adverts) {
            const auto& s = a.service;
            if (s.provider == state.id || s.expiration_time < now) continue;

            auto [it, inserted] = state.service_table.try_emplace(service_key(s), s);
            if (!inserted && it->second.expiration_time < s.expiration_time) it->second = s;

            RouteEntry route;
            route.destination = s.provider;
            route.sequence_number = a.provider_seq;
            route.hop_count = a.hops_to_provider + 1;
            route.next_node = from;
            route.status = RouteStatus::Permanent;
            route_upsert(state.routing_table, route);
        }
    }

    const SimTime deferred = now + jitter;
    if (deferred > state.next_broadcast_at) {
        state.next_broadcast_at = deferred;
        out.push_back(TimerSet{deferred});
    }
    return out;
}

Effects begin_discovery(NodeState& state, const EngineParams& /*params*/, const ServiceQuery& query,
                        SimTime now) {
    Effects out;
    if (auto hit = find_local_match(state, query, now)) {
        out.push_back(DiscoveryLocalHit{query, hit->provider, std::move(hit->services)});
        return out;
    }

    const RequestId rid{state.id, state.next_request_counter++};
    state.pending[rid] = PendingDiscovery{query, now};
    state.seen_sreq[rid] = now;
    out.push_back(Broadcast{Sreq{rid, state.id, query, 0}});
    return out;
}

Effects on_sreq(NodeState& state, const EngineParams& params, const Sreq& msg, NodeId from,
                SimTime now) {
    Effects out;
    if (from == state.id || state.seen_sreq.contains(msg.request_id)) return out;
    state.seen_sreq[msg.request_id] = now;

    // Reverse route toward the requester. A permanent route already there
    // is kept; the reply can travel over it just as well.
    if (msg.origin != state.id) {
        auto [it, inserted] = state.routing_table.try_emplace(msg.origin);
        RouteEntry& reverse = it->second;
        if (inserted || reverse.status == RouteStatus::Temporary) {
            reverse.destination = msg.origin;
            reverse.next_node = from;
            reverse.hop_count = msg.hop_count + 1;
            reverse.status = RouteStatus::Temporary;
        }
    }

    if (auto hit = find_local_match(state, msg.query, now)) {
        Srep reply;
        reply.request_id = msg.request_id;
        reply.origin = msg.origin;
        reply.provider = hit->provider;
        if (hit->provider == state.id) {
            for (const auto& s : hit->services) reply.services.push_back(stamped(s, params, now));
            reply.hops_to_provider = 0;
        } else {
            reply.services = std::move(hit->services);
            auto& route = state.routing_table.at(hit->provider);
            route.precursors.insert(from);
            reply.hops_to_provider = route.hop_count;
        }
        out.push_back(Unicast{from, std::move(reply)});
        return out;
    }

    if (msg.hop_count + 1 < params.sreq_ttl) {
        Sreq next = msg;
        next.hop_count = msg.hop_count + 1;
        out.push_back(Broadcast{std::move(next)});
    }
    return out;
}

Effects on_srep(NodeState& state, const EngineParams& /*params*/, const Srep& msg, NodeId from,
                SimTime /*now*/) {
    Effects out;
    if (from == state.id || msg.provider == state.id) return out;

    // SREP carries no provider sequence number; reuse what we already hold.
    RouteEntry forward;
    forward.destination = msg.provider;
    forward.next_node = from;
    forward.hop_count = msg.hops_to_provider + 1;
    forward.status = RouteStatus::Permanent;
    if (const auto* existing = state.route_to(msg.provider))
        forward.sequence_number = existing->sequence_number;
    route_upsert(state.routing_table, forward);

    if (msg.request_id.origin == state.id) {
        if (state.pending.erase(msg.request_id) > 0)
            out.push_back(DiscoveryCompleted{msg.request_id, msg.provider, msg.services});
        return out;
    }

    const auto reverse = state.routing_table.find(msg.origin);
    if (reverse == state.routing_table.end()) return out;
    const NodeId up = reverse->second.next_node;
    if (up == from || up == state.id) return out;
    if (reverse->second.status == RouteStatus::Temporary) state.routing_table.erase(reverse);

    auto& route = state.routing_table.at(msg.provider);
    if (route.next_node == up) return out;
    route.precursors.insert(up);

    Srep next = msg;
    next.hops_to_provider = route.hop_count;
    out.push_back(Unicast{up, std::move(next)});
    return out;
}

Effects on_link_down(NodeState& state, const EngineParams& /*params*/, NodeId lost_neighbor,
                     SimTime now) {
    Effects out;
    Rerr rerr;
    std::set<NodeId> precursors;
    for (auto it = state.routing_table.begin(); it != state.routing_table.end();) {
        const RouteEntry& r = it->second;
        if (r.next_node != lost_neighbor) {
            ++it;
            continue;
        }
        rerr.unreachable.push_back({r.destination, r.sequence_number});
        precursors.insert(r.precursors.begin(), r.precursors.end());
        it = state.routing_table.erase(it);
    }
    if (rerr.unreachable.empty()) return out;

    precursors.erase(lost_neighbor);
    precursors.erase(state.id);
    rerr.error_id = ErrorId{state.id, state.next_error_counter++};
    state.seen_rerr[rerr.error_id] = now;
    notify(out, rerr, precursors);
    return out;
}

Effects on_rerr(NodeState& state, const EngineParams& /*params*/, const Rerr& msg, NodeId from,
                SimTime now) {
    Effects out;
    if (state.seen_rerr.contains(msg.error_id)) return out;
    state.seen_rerr[msg.error_id] = now;

    Rerr trimmed{msg.error_id, {}};
    std::set<NodeId> precursors;
    for (const auto& u : msg.unreachable) {
        const auto it = state.routing_table.find(u.destination);
        if (it == state.routing_table.end()) continue;
        const RouteEntry& r = it->second;
        if (r.next_node != from || r.sequence_number > u.sequence_number) continue;
        trimmed.unreachable.push_back(u);
        precursors.insert(r.precursors.begin(), r.precursors.end());
        state.routing_table.erase(it);
    }
    if (trimmed.unreachable.empty()) return out;

    precursors.erase(state.id);
    notify(out, trimmed, precursors);
    return out;
}

Effects forward_data(NodeState& state, const EngineParams& /*params*/, const Data& msg,
                     SimTime /*now*/) {
    Effects out;
    if (msg.destination == state.id) {
        out.push_back(DataDelivered{msg});
        return out;
    }
    const auto* route = permanent_route(state, msg.destination);
    if (route != nullptr && route->next_node != state.id) out.push_back(Unicast{route->next_node, msg});
    return out;
}

}  // namespace sdsim
