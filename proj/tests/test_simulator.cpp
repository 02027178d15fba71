#include "doctest.h"

#include <set>
#include <sstream>
#include <tuple>

#include "sdsim/codec.hpp"
#include "sdsim/simulator.hpp"
#include "support/networks.hpp"

using namespace sdsim;
using namespace sdsim::testing;
using namespace std::chrono_literals;

namespace {

ServiceQuery query_type(const std::string& type) { return ServiceQuery{type, std::nullopt}; }

}  // namespace

TEST_CASE("three-node line resolves a two-hop discovery at 1.040 s") {
    const auto cfg = quiet_config(3);
    auto setup = empty_setup(line_topology(3));
    setup.services[2].push_back(offering(2, "printer"));

    Simulator sim(cfg, setup);
    const auto idx = sim.schedule_discovery(1s, 0, query_type("printer"));
    sim.run_until(2s);

    const auto& rec = sim.requests().at(idx);
    CHECK(rec.outcome == Outcome::Completed);
    REQUIRE(rec.end.has_value());
    CHECK(*rec.end == 1040ms);
    const auto* route = sim.node(0).route_to(2);
    REQUIRE(route != nullptr);
    CHECK(route->hop_count == 2);
    CHECK(route->next_node == 1);
    CHECK(route->status == RouteStatus::Permanent);
    CHECK(sim.messages_sent().at("SREQ") == 2);
    CHECK(sim.messages_sent().at("SREP") == 2);

    SUBCASE("data follows the discovered route without further discovery") {
        sim.schedule_data(2s, 0, 2);
        sim.run_until(3s);
        CHECK(sim.data_delivered() == 1);
        CHECK(sim.messages_sent().at("DATA") == 2);
        CHECK(sim.messages_sent().at("SREQ") == 2);
    }
}

TEST_CASE("own service is a local hit with zero latency") {
    const auto cfg = quiet_config(2);
    auto setup = empty_setup(line_topology(2));
    setup.services[0].push_back(offering(0, "printer"));
    Simulator sim(cfg, setup);
    const auto idx = sim.schedule_discovery(1s, 0, query_type("printer"));
    sim.run_until(2s);
    CHECK(sim.requests()[idx].outcome == Outcome::LocalHit);
    CHECK(sim.requests()[idx].latency() == 0ms);
    CHECK(sim.messages_sent().empty());
}

TEST_CASE("a link broken while a request is in flight drops it") {
    const auto cfg = quiet_config(3);
    auto setup = empty_setup(line_topology(3));
    setup.services[2].push_back(offering(2, "printer"));
    Simulator sim(cfg, setup);
    const auto idx = sim.schedule_discovery(1s, 0, query_type("printer"));
    sim.run_until(1015ms);  // node 1 has rebroadcast, node 2 has not received
    sim.break_link(1, 2);
    sim.run_until(3s);
    CHECK(sim.requests()[idx].outcome == Outcome::Unanswered);
    CHECK(sim.node(2).seen_sreq.empty());
}

TEST_CASE("a broken link tears down routes upstream and data is dropped") {
    const auto cfg = quiet_config(3);
    auto setup = empty_setup(line_topology(3));
    setup.services[2].push_back(offering(2, "printer"));
    Simulator sim(cfg, setup);
    sim.schedule_discovery(1s, 0, query_type("printer"));
    sim.run_until(2s);
    REQUIRE(sim.node(1).route_to(2) != nullptr);
    REQUIRE(sim.node(0).route_to(2) != nullptr);

    sim.break_link(1, 2);
    CHECK(sim.node(1).route_to(2) == nullptr);
    CHECK(sim.drain(3s));
    CHECK(sim.node(0).route_to(2) == nullptr);
    CHECK(sim.messages_sent().at("RERR") >= 1);

    sim.schedule_data(2200ms, 0, 2);
    sim.run_until(3s);
    CHECK(sim.data_delivered() == 0);
    CHECK(sim.data_dropped() == 1);
}

TEST_CASE("zero-length run reports nothing") {
    ScenarioConfig cfg;
    cfg.sim_duration = 0ms;
    const auto report = run(cfg);
    CHECK(report.total_requests == 0);
    CHECK(report.histogram.empty());
    CHECK(report.first_bucket_fraction() == 0.0);
}

TEST_CASE("invalid configuration is rejected before anything runs") {
    ScenarioConfig cfg;
    cfg.num_nodes = 1;
    CHECK_THROWS_AS(run(cfg), ConfigInvalid);
    CHECK_THROWS_AS(Simulator{cfg}, ConfigInvalid);
}

TEST_CASE("a scenario run is a pure function of its configuration") {
    ScenarioConfig cfg;
    cfg.num_nodes = 30;
    cfg.seed = 17;
    std::ostringstream a, b;
    const auto ra = run(cfg, &a);
    const auto rb = run(cfg, &b);
    CHECK(a.str() == b.str());
    CHECK(histogram_csv(ra.histogram) == histogram_csv(rb.histogram));
    CHECK(summary_csv(ra) == summary_csv(rb));
    CHECK(ra.messages_sent_by_kind == rb.messages_sent_by_kind);

    cfg.seed = 18;
    std::ostringstream c;
    run(cfg, &c);
    CHECK(a.str() != c.str());
}

TEST_CASE("every request ends in exactly one outcome") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        ScenarioConfig cfg;
        cfg.seed = seed;
        const auto r = run(cfg);
        CHECK(r.completed + r.unanswered == r.total_requests);
        CHECK(r.local_hits <= r.completed);
        std::size_t in_buckets = 0;
        for (const auto& b : r.histogram) in_buckets += b.count;
        CHECK(in_buckets == r.completed);
    }
}

TEST_CASE("deliveries respect links and the per-hop delay") {
    ScenarioConfig cfg;
    cfg.seed = 3;
    cfg.num_nodes = 25;
    Simulator sim(cfg);

    // (sender, encoded message, send time) for every transmission.
    std::multiset<std::tuple<NodeId, std::string, std::int64_t>> sent;
    std::size_t deliveries = 0, unmatched = 0, across_missing_link = 0;
    Observer obs;
    obs.on_effect = [&](NodeId node, const Effect& e, SimTime now) {
        if (const auto* b = std::get_if<Broadcast>(&e))
            sent.emplace(node, encode_message(b->msg), now.count());
        else if (const auto* u = std::get_if<Unicast>(&e))
            sent.emplace(node, encode_message(u->msg), now.count());
    };
    obs.on_deliver = [&](NodeId to, NodeId from, const Message& msg, const NodeState&, SimTime now) {
        ++deliveries;
        if (!sim.topology().linked(to, from)) ++across_missing_link;
        const auto key = std::tuple{from, encode_message(msg), (now - cfg.per_hop_delay).count()};
        if (!sent.contains(key)) ++unmatched;
    };
    sim.set_observer(obs);
    sim.schedule_churn();
    RandomStream wl(cfg.seed, stream::kWorkload);
    sim.schedule_workload(generate_workload(cfg, wl));
    sim.run_until(cfg.sim_duration);

    CHECK(deliveries > 100);
    CHECK(unmatched == 0);
    CHECK(across_missing_link == 0);
}
