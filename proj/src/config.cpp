#include "sdsim/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace sdsim {

namespace {

[[noreturn]] void type_error(std::string_view key, std::size_t line, std::string_view expected) {
    std::string msg = "value of '" + std::string(key) + "' must be " + std::string(expected);
    if (line != 0) msg += " (line " + std::to_string(line) + ")";
    throw ConfigError(ConfigError::Kind::TypeError, std::string(key), line, msg);
}

[[noreturn]] void range_error(std::string_view key, std::size_t line, std::string_view rule) {
    std::string msg = "'" + std::string(key) + "' out of range: " + std::string(rule);
    if (line != 0) msg += " (line " + std::to_string(line) + ")";
    throw ConfigError(ConfigError::Kind::RangeError, std::string(key), line, msg);
}

template <class T>
T parse_unsigned(std::string_view key, std::string_view v, std::size_t line) {
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
        type_error(key, line, "a non-negative integer");
    return out;
}

double parse_double(std::string_view key, std::string_view v, std::size_t line) {
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
        type_error(key, line, "a number");
    return out;
}

bool parse_bool(std::string_view key, std::string_view v, std::size_t line) {
    if (v == "true") return true;
    if (v == "false") return false;
    type_error(key, line, "true or false");
}

Duration parse_seconds(std::string_view key, std::string_view v, std::size_t line) {
    const double s = parse_double(key, v, line);
    if (s < 0) range_error(key, line, "must not be negative");
    if (s > 1e12) range_error(key, line, "too large");
    return Duration{std::llround(s * 1000.0)};
}

std::string show_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

struct Field {
    std::function<void(ScenarioConfig&, std::string_view, std::size_t)> set;
    std::function<std::string(const ScenarioConfig&)> show;
};

template <class T>
Field unsigned_field(T ScenarioConfig::*member, std::string_view key) {
    return {[member, key](ScenarioConfig& c, std::string_view v, std::size_t line) {
                c.*member = parse_unsigned<T>(key, v, line);
            },
            [member](const ScenarioConfig& c) { return std::to_string(c.*member); }};
}

Field double_field(double ScenarioConfig::*member, std::string_view key) {
    return {[member, key](ScenarioConfig& c, std::string_view v, std::size_t line) {
                c.*member = parse_double(key, v, line);
            },
            [member](const ScenarioConfig& c) { return show_double(c.*member); }};
}

Field bool_field(bool ScenarioConfig::*member, std::string_view key) {
    return {[member, key](ScenarioConfig& c, std::string_view v, std::size_t line) {
                c.*member = parse_bool(key, v, line);
            },
            [member](const ScenarioConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

Field seconds_field(Duration ScenarioConfig::*member, std::string_view key) {
    return {[member, key](ScenarioConfig& c, std::string_view v, std::size_t line) {
                c.*member = parse_seconds(key, v, line);
            },
            [member](const ScenarioConfig& c) { return format_seconds(c.*member); }};
}

// Serialization order.
const std::vector<std::pair<std::string_view, Field>>& fields() {
    static const std::vector<std::pair<std::string_view, Field>> table = {
        {"seed", unsigned_field(&ScenarioConfig::seed, "seed")},
        {"num_nodes", unsigned_field(&ScenarioConfig::num_nodes, "num_nodes")},
        {"sim_duration_s", seconds_field(&ScenarioConfig::sim_duration, "sim_duration_s")},
        {"broadcast_enabled", bool_field(&ScenarioConfig::broadcast_enabled, "broadcast_enabled")},
        {"store_probability", double_field(&ScenarioConfig::store_probability, "store_probability")},
        {"num_services", unsigned_field(&ScenarioConfig::num_services, "num_services")},
        {"link_probability", double_field(&ScenarioConfig::link_probability, "link_probability")},
        {"link_repair", bool_field(&ScenarioConfig::link_repair, "link_repair")},
        {"churn_enabled", bool_field(&ScenarioConfig::churn_enabled, "churn_enabled")},
        {"churn_interval_s", seconds_field(&ScenarioConfig::churn_interval, "churn_interval_s")},
        {"churn_probability", double_field(&ScenarioConfig::churn_probability, "churn_probability")},
        {"max_requests_per_tick",
         unsigned_field(&ScenarioConfig::max_requests_per_tick, "max_requests_per_tick")},
        {"per_hop_delay_s", seconds_field(&ScenarioConfig::per_hop_delay, "per_hop_delay_s")},
        {"broadcast_period_s", seconds_field(&ScenarioConfig::broadcast_period, "broadcast_period_s")},
        {"sreq_ttl", unsigned_field(&ScenarioConfig::sreq_ttl, "sreq_ttl")},
        {"service_lifetime_s", seconds_field(&ScenarioConfig::service_lifetime, "service_lifetime_s")},
        {"max_ust_entries", unsigned_field(&ScenarioConfig::max_ust_entries, "max_ust_entries")},
        {"bucket_width_s", seconds_field(&ScenarioConfig::bucket_width, "bucket_width_s")},
    };
    return table;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

EngineParams ScenarioConfig::engine_params() const {
    EngineParams p;
    p.broadcast_period = broadcast_period;
    p.sreq_ttl = sreq_ttl;
    p.service_lifetime = service_lifetime;
    p.max_ust_entries = max_ust_entries;
    p.dup_cache_ttl = dup_cache_ttl();
    p.broadcast_enabled = broadcast_enabled;
    return p;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value,
                   std::size_t line) {
    for (const auto& [name, field] : fields()) {
        if (name == key) {
            field.set(cfg, trim(value), line);
            return;
        }
    }
    std::string msg = "unknown key '" + std::string(key) + "'";
    if (line != 0) msg += " (line " + std::to_string(line) + ")";
    throw ConfigError(ConfigError::Kind::UnknownKey, std::string(key), line, msg);
}

void validate(const ScenarioConfig& c) {
    auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (c.num_nodes < 2) range_error("num_nodes", 0, "at least 2 nodes");
    if (c.num_services < 1) range_error("num_services", 0, "at least 1 service");
    if (!probability(c.store_probability)) range_error("store_probability", 0, "must lie in [0, 1]");
    if (!probability(c.link_probability)) range_error("link_probability", 0, "must lie in [0, 1]");
    if (!probability(c.churn_probability)) range_error("churn_probability", 0, "must lie in [0, 1]");
    if (c.sim_duration.count() < 0) range_error("sim_duration_s", 0, "must not be negative");
    if (c.churn_interval.count() <= 0) range_error("churn_interval_s", 0, "must be positive");
    if (c.per_hop_delay.count() <= 0) range_error("per_hop_delay_s", 0, "must be positive");
    if (c.broadcast_period.count() < 2) range_error("broadcast_period_s", 0, "must be at least 0.002");
    if (c.service_lifetime.count() <= 0) range_error("service_lifetime_s", 0, "must be positive");
    if (c.bucket_width.count() <= 0) range_error("bucket_width_s", 0, "must be positive");
    if (c.sreq_ttl < 1) range_error("sreq_ttl", 0, "must be at least 1");
    if (c.max_ust_entries < 1) range_error("max_ust_entries", 0, "must be at least 1");
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig cfg;
    std::map<std::string, std::size_t, std::less<>> key_lines;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        auto line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(ConfigError::Kind::Syntax, {}, line_no,
                              "expected 'key = value' (line " + std::to_string(line_no) + ")");
        }
        const auto key = trim(line.substr(0, eq));
        apply_setting(cfg, key, line.substr(eq + 1), line_no);
        key_lines[std::string(key)] = line_no;
    }

    try {
        validate(cfg);
    } catch (const ConfigError& e) {
        const auto it = key_lines.find(e.key());
        if (it == key_lines.end()) throw;
        throw ConfigError(e.kind(), e.key(), it->second,
                          std::string(e.what()) + " (line " + std::to_string(it->second) + ")");
    }
    return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::string out = "# service discovery scenario\n";
    for (const auto& [name, field] : fields()) {
        out += name;
        out += " = ";
        out += field.show(cfg);
        out += '\n';
    }
    out += "# dup_cache_ttl_s = " + format_seconds(cfg.dup_cache_ttl()) + " (derived: 2 x broadcast_period_s)\n";
    return out;
}

}  // namespace sdsim
