#ifndef SDSIM_TYPES_HPP
#define SDSIM_TYPES_HPP

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>

namespace sdsim {

using NodeId = std::uint32_t;

// Simulation clock: milliseconds since scenario start.
using SimTime = std::chrono::milliseconds;
using Duration = std::chrono::milliseconds;

inline constexpr SimTime kForever = SimTime::max();

inline double to_seconds(SimTime t) { return static_cast<double>(t.count()) / 1000.0; }

// Decimal seconds with exactly three fractional digits, or "inf".
std::string format_seconds(SimTime t);

enum class RouteStatus { Temporary, Permanent };

struct RouteEntry {
    NodeId destination = 0;
    std::uint64_t sequence_number = 0;
    std::uint32_t hop_count = 0;
    NodeId next_node = 0;
    RouteStatus status = RouteStatus::Temporary;
    std::set<NodeId> precursors;

    bool operator==(const RouteEntry&) const = default;
};

struct ServiceEntry {
    NodeId provider = 0;
    std::string service_name;
    std::string service_type;
    std::string description;
    SimTime expiration_time = kForever;

    bool operator==(const ServiceEntry&) const = default;
};

struct ServiceQuery {
    std::string service_type;
    std::optional<std::string> service_name;  // absent: match on type alone

    bool operator==(const ServiceQuery&) const = default;
};

// (origin, per-origin counter) identifies one flooded request.
struct RequestId {
    NodeId origin = 0;
    std::uint64_t counter = 0;

    auto operator<=>(const RequestId&) const = default;
};

struct ErrorId {
    NodeId origin = 0;
    std::uint64_t counter = 0;

    auto operator<=>(const ErrorId&) const = default;
};

/// Exact-match lookup predicate used for both local hits and SREQ answers.
/// An entry is usable up to and including its expiration instant.
bool service_matches(const ServiceQuery& query, const ServiceEntry& entry, SimTime now);

}  // namespace sdsim

#endif  // SDSIM_TYPES_HPP
