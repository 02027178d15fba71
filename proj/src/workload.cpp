#include "sdsim/workload.hpp"

#include <cmath>
#include <cstdio>

namespace sdsim {

namespace {

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string service_type_name(std::size_t index) { return "svc-" + std::to_string(index); }

std::vector<std::vector<ServiceEntry>> assign_services(const ScenarioConfig& cfg, RandomStream& rng) {
    std::vector<std::vector<ServiceEntry>> placement(cfg.num_nodes);
    for (std::size_t k = 0; k < cfg.num_services; ++k) {
        const auto node = static_cast<NodeId>(rng.below(cfg.num_nodes));
        ServiceEntry s;
        s.provider = node;
        s.service_type = service_type_name(k);
        s.service_name = service_type_name(k) + "@" + std::to_string(node);
        s.description = "urn:sdsim:node:" + std::to_string(node) + ":" + service_type_name(k);
        s.expiration_time = kForever;
        placement[node].push_back(std::move(s));
    }
    return placement;
}

std::vector<SimTime> tick_times(const ScenarioConfig& cfg) {
    std::vector<SimTime> ticks;
    for (SimTime t{0}; t < cfg.sim_duration; t += cfg.churn_interval) ticks.push_back(t);
    return ticks;
}

std::vector<WorkloadItem> generate_workload(const ScenarioConfig& cfg, RandomStream& rng) {
    std::vector<WorkloadItem> items;
    const auto ticks = tick_times(cfg);
    for (std::size_t tick = 0; tick < ticks.size(); ++tick) {
        const auto count = static_cast<std::size_t>(rng.between(0, cfg.max_requests_per_tick));
        for (std::size_t slot = 0; slot < count; ++slot) {
            WorkloadItem item;
            item.at = ticks[tick];
            item.tick = tick;
            item.slot = slot;
            item.node = static_cast<NodeId>(rng.below(cfg.num_nodes));
            item.query.service_type = service_type_name(rng.below(cfg.num_services));
            items.push_back(std::move(item));
        }
    }
    return items;
}

Histogram bucketize(std::span<const double> latencies_s, double bucket_width_s) {
    Histogram out;
    for (double latency : latencies_s) {
        // The small bias puts values that are a whole number of widths in
        // decimal (0.6 / 0.2 == 2.9999...) into the upper bucket.
        const auto k = static_cast<std::size_t>(std::floor(latency / bucket_width_s + 1e-9));
        while (out.size() <= k) {
            const auto i = static_cast<double>(out.size());
            out.push_back({i * bucket_width_s, (i + 1) * bucket_width_s, 0});
        }
        ++out[k].count;
    }
    return out;
}

double MetricsReport::first_bucket_fraction() const {
    if (total_requests == 0) return 0.0;
    const std::size_t first = histogram.empty() ? 0 : histogram.front().count;
    return static_cast<double>(first) / static_cast<double>(total_requests);
}

MetricsReport summarize(std::span<const RequestRecord> records, Duration bucket_width,
                        std::map<std::string, std::uint64_t> messages_sent_by_kind) {
    MetricsReport report;
    report.messages_sent_by_kind = std::move(messages_sent_by_kind);
    std::vector<double> latencies;
    for (const auto& r : records) {
        ++report.total_requests;
        switch (r.outcome) {
            case Outcome::LocalHit: ++report.local_hits; [[fallthrough]];
            case Outcome::Completed:
                ++report.completed;
                latencies.push_back(to_seconds(*r.latency()));
                break;
            case Outcome::Unanswered: ++report.unanswered; break;
        }
    }
    report.histogram = bucketize(latencies, to_seconds(bucket_width));
    return report;
}

std::string histogram_csv(const Histogram& histogram) {
    std::string out = "bucket_start_s,bucket_end_s,count\n";
    for (const auto& b : histogram)
        out += fixed3(b.start_s) + "," + fixed3(b.end_s) + "," + std::to_string(b.count) + "\n";
    return out;
}

std::string summary_csv(const MetricsReport& report) {
    return "total,completed,local_hits,unanswered\n" + std::to_string(report.total_requests) + "," +
           std::to_string(report.completed) + "," + std::to_string(report.local_hits) + "," +
           std::to_string(report.unanswered) + "\n";
}

}  // namespace sdsim
