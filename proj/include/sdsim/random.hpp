#ifndef SDSIM_RANDOM_HPP
#define SDSIM_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace sdsim {

// A named random stream derived from a scenario's master seed. Each concern
// (topology, churn, workload, ...) draws from its own stream so toggling one
// feature never shifts another feature's draws.
//
// The bounded draws are implemented here rather than through
// std::uniform_*_distribution, whose output is library-specific.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::string_view domain);

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1), 53 bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n); n must be > 0.
    std::uint64_t below(std::uint64_t n);

    // Uniform in [lo, hi], inclusive.
    std::int64_t between(std::int64_t lo, std::int64_t hi);

    bool chance(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

namespace stream {
inline constexpr std::string_view kTopology = "topology";
inline constexpr std::string_view kChurn = "churn";
inline constexpr std::string_view kWorkload = "workload";
inline constexpr std::string_view kCapabilities = "capabilities";
inline constexpr std::string_view kPlacement = "placement";
inline constexpr std::string_view kJitter = "jitter";
inline constexpr std::string_view kTimers = "timers";
}  // namespace stream

}  // namespace sdsim

#endif  // SDSIM_RANDOM_HPP
