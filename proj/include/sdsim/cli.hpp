#ifndef SDSIM_CLI_HPP
#define SDSIM_CLI_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdsim/config.hpp"
#include "sdsim/workload.hpp"

namespace sdsim {

struct RunOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir = ".";
    bool trace = false;
    std::vector<std::string> overrides;  // "key=value"
};

struct CompareOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir = ".";
    std::size_t seeds = 20;
    std::vector<std::string> overrides;
};

/// Reads a scenario file and layers, in increasing precedence, the
/// SDSIM_SEED environment variable and `key=value` overrides on top.
ScenarioConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides,
                           std::optional<std::string> env_seed);

struct SeedComparison {
    std::uint64_t seed = 0;
    MetricsReport with_broadcast;
    MetricsReport without_broadcast;

    double difference() const {
        return with_broadcast.first_bucket_fraction() - without_broadcast.first_bucket_fraction();
    }
};

struct Comparison {
    std::vector<SeedComparison> per_seed;

    double mean_with() const;
    double mean_without() const;
    double mean_difference() const;
    double non_negative_share() const;  // seeds whose paired difference is >= 0
};

/// Runs each derived seed (base, base+1, ...) with and without periodic
/// advertisement. Runs execute concurrently; results are in seed order.
Comparison compare_scenario(const ScenarioConfig& base, std::size_t seed_count);

std::string compare_csv(const Comparison& cmp);
std::string compare_summary_csv(const Comparison& cmp);

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err);
int cmd_print_config(std::ostream& out);

}  // namespace sdsim

#endif  // SDSIM_CLI_HPP
