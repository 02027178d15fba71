#ifndef SDSIM_SIMULATOR_HPP
#define SDSIM_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "sdsim/config.hpp"
#include "sdsim/node_engine.hpp"
#include "sdsim/random.hpp"
#include "sdsim/topology.hpp"
#include "sdsim/workload.hpp"

namespace sdsim {

class ConfigInvalid : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Initial conditions of a network. Derived from the scenario seed by
// default; tests may construct one by hand.
struct NetworkSetup {
    Topology topology;
    std::vector<bool> can_store;
    std::vector<std::vector<ServiceEntry>> services;
    std::vector<SimTime> first_broadcast;
};

NetworkSetup make_network(const ScenarioConfig& cfg);

// Optional hooks for tests and tooling.
struct Observer {
    // Before a message is handed to the receiving node.
    std::function<void(NodeId to, NodeId from, const Message& msg, const NodeState& receiver,
                       SimTime now)>
        on_deliver;
    // Every effect emitted by any node, in emission order.
    std::function<void(NodeId node, const Effect& effect, SimTime now)> on_effect;
};

/// Deterministic discrete-event driver for a set of node engines.
///
/// Events at equal timestamps run in insertion order. Broadcasts fan out to
/// the sender's current neighbours, unicasts go out only over a live link;
/// a unicast to a non-neighbour is reported back to the sender as a broken
/// link. A message whose link breaks while it is in flight is dropped.
class Simulator {
public:
    explicit Simulator(const ScenarioConfig& cfg);
    Simulator(const ScenarioConfig& cfg, NetworkSetup setup);

    void set_trace(std::ostream* trace) { trace_ = trace; }
    void set_observer(Observer observer) { observer_ = std::move(observer); }

    /// Queues the scenario's churn ticks (when churn is enabled).
    void schedule_churn();
    void schedule_workload(const std::vector<WorkloadItem>& workload);
    /// Queues a single discovery; returns the index of its request record.
    std::size_t schedule_discovery(SimTime at, NodeId node, ServiceQuery query);
    void schedule_data(SimTime at, NodeId source, NodeId destination, std::string tag = "probe");

    /// Removes an edge now and notifies both endpoints.
    void break_link(NodeId a, NodeId b);

    /// Runs every event with timestamp <= horizon.
    void run_until(SimTime horizon);
    /// Runs until no messages are in flight or the horizon is reached.
    /// Returns true when the network went quiet.
    bool drain(SimTime horizon);

    SimTime now() const { return now_; }
    std::size_t in_flight() const { return in_flight_; }
    const ScenarioConfig& config() const { return cfg_; }
    const Topology& topology() const { return topology_; }
    const NodeState& node(NodeId id) const { return nodes_.at(id); }
    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<RequestRecord>& requests() const { return records_; }
    const std::map<std::string, std::uint64_t>& messages_sent() const { return sent_; }
    std::uint64_t data_delivered() const { return data_delivered_; }
    std::uint64_t data_dropped() const { return data_dropped_; }

    MetricsReport report() const;

private:
    struct Deliver {
        NodeId to;
        NodeId from;
        Message msg;
        std::uint64_t link_epoch;
        std::uint32_t data_hops;
    };
    struct Timer {
        NodeId node;
    };
    struct Churn {};
    struct WorkloadTick {
        std::size_t tick;
        std::vector<std::size_t> records;
    };
    struct Discover {
        std::size_t record;
    };
    struct InjectData {
        Data data;
    };
    using Payload = std::variant<Deliver, Timer, Churn, WorkloadTick, Discover, InjectData>;

    struct Event {
        SimTime at;
        std::uint64_t seq;
        Payload payload;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return a.at != b.at ? a.at > b.at : a.seq > b.seq;
        }
    };

    void push(SimTime at, Payload payload);
    void execute(Event& ev);
    void handle(Deliver& d);
    void start_discovery(std::size_t record);
    void apply(NodeId node, const Effects& effects, std::uint32_t data_hops = 0);
    void send(NodeId from, NodeId to, const Message& msg, std::uint32_t data_hops);
    void link_down(NodeId node, NodeId lost);
    void count_sent(const Message& msg);
    std::uint64_t& epoch(NodeId a, NodeId b);
    void trace(std::string_view kind, const std::string& node, const std::string& detail);

    ScenarioConfig cfg_;
    EngineParams params_;
    Topology topology_;
    std::vector<NodeState> nodes_;
    RandomStream churn_rng_;
    RandomStream jitter_rng_;

    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t next_seq_ = 0;
    SimTime now_{0};
    std::size_t in_flight_ = 0;
    std::vector<std::uint64_t> link_epochs_;

    std::vector<RequestRecord> records_;
    std::map<RequestId, std::size_t> record_of_request_;
    std::map<std::string, std::uint64_t> sent_;
    std::uint64_t data_delivered_ = 0;
    std::uint64_t data_dropped_ = 0;

    std::ostream* trace_ = nullptr;
    Observer observer_;
};

/// Full scenario: seeded network, churn, and the given request timeline.
MetricsReport run(const ScenarioConfig& cfg, const std::vector<WorkloadItem>& workload,
                  std::ostream* trace = nullptr);

/// Full scenario with the workload drawn from the scenario's own stream.
MetricsReport run(const ScenarioConfig& cfg, std::ostream* trace = nullptr);

}  // namespace sdsim

#endif  // SDSIM_SIMULATOR_HPP
