#include "sdsim/topology.hpp"

#include <algorithm>
#include <cassert>

namespace sdsim {

void Topology::link(NodeId a, NodeId b) {
    assert(a != b && a < n_ && b < n_);
    adj_[a * n_ + b] = 1;
    adj_[b * n_ + a] = 1;
}

void Topology::unlink(NodeId a, NodeId b) {
    adj_[a * n_ + b] = 0;
    adj_[b * n_ + a] = 0;
}

std::vector<NodeId> Topology::neighbors(NodeId node) const {
    std::vector<NodeId> out;
    for (NodeId other = 0; other < n_; ++other)
        if (linked(node, other)) out.push_back(other);
    return out;
}

std::size_t Topology::edge_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < adj_.size(); ++i) count += adj_[i];
    return count / 2;
}

std::vector<std::vector<NodeId>> Topology::components() const {
    std::vector<int> label(n_, -1);
    std::vector<std::vector<NodeId>> comps;
    for (NodeId start = 0; start < n_; ++start) {
        if (label[start] >= 0) continue;
        const int id = static_cast<int>(comps.size());
        comps.emplace_back();
        std::vector<NodeId> stack{start};
        label[start] = id;
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            comps[id].push_back(u);
            for (NodeId v = 0; v < n_; ++v) {
                if (linked(u, v) && label[v] < 0) {
                    label[v] = id;
                    stack.push_back(v);
                }
            }
        }
        std::sort(comps[id].begin(), comps[id].end());
    }
    return comps;
}

Topology random_topology(std::size_t n, double link_probability, bool repair, RandomStream& rng) {
    Topology topo(n);
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b)
            if (rng.chance(link_probability)) topo.link(a, b);

    if (repair) {
        const auto comps = topo.components();
        for (std::size_t i = 0; i + 1 < comps.size(); ++i) topo.link(comps[i].front(), comps[i + 1].front());
    }
    return topo;
}

Topology build_topology(const ScenarioConfig& cfg, RandomStream& rng) {
    return random_topology(cfg.num_nodes, cfg.link_probability, cfg.link_repair, rng);
}

ChurnStep apply_churn(Topology& topology, const ScenarioConfig& cfg, RandomStream& rng) {
    ChurnStep step;
    step.wanted_add = rng.chance(cfg.churn_probability);

    std::vector<Edge> candidates;
    const auto n = static_cast<NodeId>(topology.size());
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b)
            if (topology.linked(a, b) != step.wanted_add) candidates.emplace_back(a, b);
    if (candidates.empty()) return step;

    const Edge e = candidates[rng.below(candidates.size())];
    if (step.wanted_add) {
        topology.link(e.first, e.second);
        step.action = ChurnStep::Action::Added;
    } else {
        topology.unlink(e.first, e.second);
        step.action = ChurnStep::Action::Removed;
    }
    step.edge = e;
    return step;
}

}  // namespace sdsim
