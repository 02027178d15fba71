#include "sdsim/types.hpp"

#include <cstdio>

namespace sdsim {

std::string format_seconds(SimTime t) {
    if (t == kForever) return "inf";
    const auto ms = t.count();
    char buf[32];
    if (ms < 0) {
        std::snprintf(buf, sizeof buf, "-%lld.%03lld", static_cast<long long>(-ms / 1000),
                      static_cast<long long>(-ms % 1000));
    } else {
        std::snprintf(buf, sizeof buf, "%lld.%03lld", static_cast<long long>(ms / 1000),
                      static_cast<long long>(ms % 1000));
    }
    return buf;
}

bool service_matches(const ServiceQuery& query, const ServiceEntry& entry, SimTime now) {
    if (entry.expiration_time < now) return false;
    if (entry.service_type != query.service_type) return false;
    return !query.service_name || *query.service_name == entry.service_name;
}

}  // namespace sdsim
