#ifndef SDSIM_TOPOLOGY_HPP
#define SDSIM_TOPOLOGY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sdsim/config.hpp"
#include "sdsim/random.hpp"
#include "sdsim/types.hpp"

namespace sdsim {

// Undirected graph over nodes 0..n-1, stored as a dense symmetric matrix.
class Topology {
public:
    Topology() = default;
    explicit Topology(std::size_t n) : n_(n), adj_(n * n, 0) {}

    std::size_t size() const { return n_; }
    bool linked(NodeId a, NodeId b) const { return adj_[a * n_ + b] != 0; }
    void link(NodeId a, NodeId b);
    void unlink(NodeId a, NodeId b);

    std::vector<NodeId> neighbors(NodeId node) const;
    std::size_t edge_count() const;

    /// Connected components, each sorted ascending, ordered by lowest member.
    std::vector<std::vector<NodeId>> components() const;
    bool connected() const { return components().size() <= 1; }

    bool operator==(const Topology&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> adj_;
};

using Edge = std::pair<NodeId, NodeId>;  // first < second

/// Independent coin flip per unordered pair (in lexicographic order), then
/// optionally chain components together: the lowest-id node of each
/// component is linked to the lowest-id node of the next one.
Topology build_topology(const ScenarioConfig& cfg, RandomStream& rng);
Topology random_topology(std::size_t n, double link_probability, bool repair, RandomStream& rng);

struct ChurnStep {
    enum class Action { Added, Removed, NoOp };
    Action action = Action::NoOp;
    std::optional<Edge> edge;
    bool wanted_add = false;  // which branch the coin picked
};

/// One churn tick: with churn_probability add a uniformly random absent
/// edge, otherwise remove a uniformly random present edge.
ChurnStep apply_churn(Topology& topology, const ScenarioConfig& cfg, RandomStream& rng);

}  // namespace sdsim

#endif  // SDSIM_TOPOLOGY_HPP
