#ifndef SDSIM_WORKLOAD_HPP
#define SDSIM_WORKLOAD_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdsim/config.hpp"
#include "sdsim/random.hpp"
#include "sdsim/types.hpp"

namespace sdsim {

std::string service_type_name(std::size_t index);  // "svc-<index>"

/// Places service types svc-0 .. svc-{k-1} once each on a uniformly random
/// node. Result is indexed by node id.
std::vector<std::vector<ServiceEntry>> assign_services(const ScenarioConfig& cfg, RandomStream& rng);

struct WorkloadItem {
    SimTime at{0};
    std::size_t tick = 0;
    std::size_t slot = 0;
    NodeId node = 0;
    ServiceQuery query;

    bool operator==(const WorkloadItem&) const = default;
};

/// Tick times k * churn_interval for every k with k * churn_interval < sim_duration.
std::vector<SimTime> tick_times(const ScenarioConfig& cfg);

std::vector<WorkloadItem> generate_workload(const ScenarioConfig& cfg, RandomStream& rng);

enum class Outcome { LocalHit, Completed, Unanswered };

struct RequestRecord {
    NodeId node = 0;
    std::size_t tick = 0;
    std::size_t slot = 0;
    ServiceQuery query;
    SimTime start{0};
    std::optional<SimTime> end;
    Outcome outcome = Outcome::Unanswered;

    std::optional<Duration> latency() const {
        if (!end) return std::nullopt;
        return *end - start;
    }
};

struct HistogramBucket {
    double start_s = 0;
    double end_s = 0;
    std::size_t count = 0;

    bool operator==(const HistogramBucket&) const = default;
};

using Histogram = std::vector<HistogramBucket>;

/// Half-open buckets [k*w, (k+1)*w). Trailing empty buckets are omitted.
Histogram bucketize(std::span<const double> latencies_s, double bucket_width_s);

struct MetricsReport {
    std::size_t total_requests = 0;
    std::size_t completed = 0;   // includes local hits
    std::size_t local_hits = 0;
    std::size_t unanswered = 0;
    Histogram histogram;
    std::map<std::string, std::uint64_t> messages_sent_by_kind;

    /// Share of all requests answered within the first bucket.
    double first_bucket_fraction() const;
};

MetricsReport summarize(std::span<const RequestRecord> records, Duration bucket_width,
                        std::map<std::string, std::uint64_t> messages_sent_by_kind);

std::string histogram_csv(const Histogram& histogram);
std::string summary_csv(const MetricsReport& report);

}  // namespace sdsim

#endif  // SDSIM_WORKLOAD_HPP
