#ifndef SDSIM_CONFIG_HPP
#define SDSIM_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sdsim/node_engine.hpp"
#include "sdsim/types.hpp"

namespace sdsim {

struct ScenarioConfig {
    std::uint64_t seed = 1;
    std::uint32_t num_nodes = 50;
    Duration sim_duration{30000};
    bool broadcast_enabled = true;
    double store_probability = 0.5;
    std::uint32_t num_services = 25;
    double link_probability = 0.08;
    bool link_repair = true;
    bool churn_enabled = true;
    Duration churn_interval{500};
    double churn_probability = 0.5;
    std::uint32_t max_requests_per_tick = 5;
    Duration per_hop_delay{10};
    Duration broadcast_period{6000};
    std::uint32_t sreq_ttl = 16;
    Duration service_lifetime{18000};
    std::uint32_t max_ust_entries = 64;
    Duration bucket_width{200};

    Duration dup_cache_ttl() const { return 2 * broadcast_period; }
    EngineParams engine_params() const;

    bool operator==(const ScenarioConfig&) const = default;
};

class ConfigError : public std::runtime_error {
public:
    enum class Kind { UnknownKey, TypeError, RangeError, Syntax };

    ConfigError(Kind kind, std::string key, std::size_t line, const std::string& what)
        : std::runtime_error(what), kind_(kind), key_(std::move(key)), line_(line) {}

    Kind kind() const { return kind_; }
    const std::string& key() const { return key_; }
    std::size_t line() const { return line_; }  // 0 when not tied to a file line

private:
    Kind kind_;
    std::string key_;
    std::size_t line_;
};

/// Parses `key = value` lines. '#' starts a comment, blank lines are
/// ignored, omitted keys keep their defaults. Durations are written in
/// seconds and resolved to whole milliseconds.
ScenarioConfig parse_config(std::string_view text);

/// Sets one key from its textual value, as `--set key=value` does.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value,
                   std::size_t line = 0);

/// Throws ConfigError(RangeError) for the first violated invariant.
void validate(const ScenarioConfig& cfg);

/// Complete scenario file listing every key.
std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace sdsim

#endif  // SDSIM_CONFIG_HPP
