#include "doctest.h"

#include "sdsim/topology.hpp"

using namespace sdsim;

TEST_CASE("two nodes with certain linking share one edge") {
    ScenarioConfig cfg;
    cfg.num_nodes = 2;
    cfg.link_probability = 1.0;
    RandomStream rng(1, stream::kTopology);
    const Topology t = build_topology(cfg, rng);
    CHECK(t.edge_count() == 1);
    CHECK(t.linked(0, 1));
    CHECK(t.linked(1, 0));
}

TEST_CASE("repair pass chains isolated nodes into a path") {
    ScenarioConfig cfg;
    cfg.num_nodes = 4;
    cfg.link_probability = 0.0;
    RandomStream rng(1, stream::kTopology);
    const Topology t = build_topology(cfg, rng);
    CHECK(t.edge_count() == 3);
    CHECK(t.linked(0, 1));
    CHECK(t.linked(1, 2));
    CHECK(t.linked(2, 3));
    CHECK(t.connected());

    cfg.link_repair = false;
    RandomStream rng2(1, stream::kTopology);
    CHECK(build_topology(cfg, rng2).edge_count() == 0);
}

TEST_CASE("repair joins lowest ids of consecutive components") {
    Topology t(6);
    t.link(0, 3);
    t.link(1, 4);
    t.link(2, 5);
    const auto comps = t.components();
    REQUIRE(comps.size() == 3);
    CHECK(comps[0] == std::vector<NodeId>{0, 3});
    CHECK(comps[1] == std::vector<NodeId>{1, 4});
}

TEST_CASE("topology is a function of the seed") {
    ScenarioConfig cfg;
    cfg.seed = 42;
    RandomStream a(cfg.seed, stream::kTopology), b(cfg.seed, stream::kTopology);
    const Topology ta = build_topology(cfg, a);
    CHECK(ta == build_topology(cfg, b));
    CHECK(ta.connected());
    for (NodeId i = 0; i < ta.size(); ++i) {
        CHECK_FALSE(ta.linked(i, i));
        for (NodeId j = 0; j < ta.size(); ++j) CHECK(ta.linked(i, j) == ta.linked(j, i));
    }
    RandomStream c(43, stream::kTopology);
    cfg.seed = 43;
    CHECK_FALSE(ta == build_topology(cfg, c));
}

TEST_CASE("churn on a complete graph cannot add") {
    ScenarioConfig cfg;
    cfg.churn_probability = 1.0;
    Topology t(4);
    for (NodeId a = 0; a < 4; ++a)
        for (NodeId b = a + 1; b < 4; ++b) t.link(a, b);
    RandomStream rng(1, stream::kChurn);
    const auto step = apply_churn(t, cfg, rng);
    CHECK(step.wanted_add);
    CHECK(step.action == ChurnStep::Action::NoOp);
    CHECK(t.edge_count() == 6);
}

TEST_CASE("churn on an empty graph cannot remove") {
    ScenarioConfig cfg;
    cfg.churn_probability = 0.0;
    Topology t(4);
    RandomStream rng(1, stream::kChurn);
    const auto step = apply_churn(t, cfg, rng);
    CHECK_FALSE(step.wanted_add);
    CHECK(step.action == ChurnStep::Action::NoOp);
}

TEST_CASE("churn replays identically from the seed and changes one edge per step") {
    ScenarioConfig cfg;
    cfg.num_nodes = 12;
    RandomStream topo(5, stream::kTopology);
    const Topology start = build_topology(cfg, topo);

    Topology a = start, b = start;
    RandomStream ra(5, stream::kChurn), rb(5, stream::kChurn);
    int adds = 0;
    for (int i = 0; i < 200; ++i) {
        const auto before = a.edge_count();
        const auto sa = apply_churn(a, cfg, ra);
        const auto sb = apply_churn(b, cfg, rb);
        CHECK(sa.action == sb.action);
        CHECK(sa.edge == sb.edge);
        if (sa.action == ChurnStep::Action::Added) {
            ++adds;
            CHECK(a.edge_count() == before + 1);
        } else if (sa.action == ChurnStep::Action::Removed) {
            CHECK(a.edge_count() == before - 1);
        }
    }
    CHECK(a == b);
    CHECK(adds > 60);
    CHECK(adds < 140);
}
