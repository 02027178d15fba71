#include "sdsim/simulator.hpp"

#include <algorithm>
#include <ostream>

#include "sdsim/codec.hpp"

namespace sdsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ScenarioConfig checked(const ScenarioConfig& cfg) {
    try {
        validate(cfg);
    } catch (const ConfigError& e) {
        throw ConfigInvalid(e.what());
    }
    return cfg;
}

std::string trace_text(const Message& msg) {
    auto line = encode_message(msg);
    line.pop_back();
    return line;
}

}  // namespace

NetworkSetup make_network(const ScenarioConfig& cfg) {
    NetworkSetup setup;
    RandomStream topo_rng(cfg.seed, stream::kTopology);
    RandomStream caps_rng(cfg.seed, stream::kCapabilities);
    RandomStream placement_rng(cfg.seed, stream::kPlacement);
    RandomStream timer_rng(cfg.seed, stream::kTimers);

    setup.topology = build_topology(cfg, topo_rng);
    for (std::uint32_t i = 0; i < cfg.num_nodes; ++i) setup.can_store.push_back(caps_rng.chance(cfg.store_probability));
    setup.services = assign_services(cfg, placement_rng);
    for (std::uint32_t i = 0; i < cfg.num_nodes; ++i)
        setup.first_broadcast.push_back(SimTime{timer_rng.between(0, cfg.broadcast_period.count() - 1)});
    return setup;
}

Simulator::Simulator(const ScenarioConfig& cfg) : Simulator(cfg, make_network(checked(cfg))) {}

Simulator::Simulator(const ScenarioConfig& cfg, NetworkSetup setup)
    : cfg_(checked(cfg)),
      params_(cfg_.engine_params()),
      topology_(std::move(setup.topology)),
      churn_rng_(cfg_.seed, stream::kChurn),
      jitter_rng_(cfg_.seed, stream::kJitter) {
    const std::size_t n = cfg_.num_nodes;
    if (topology_.size() != n || setup.can_store.size() != n || setup.services.size() != n ||
        setup.first_broadcast.size() != n)
        throw ConfigInvalid("network setup does not match num_nodes");

    link_epochs_.assign(n * n, 0);
    nodes_.reserve(n);
    for (NodeId i = 0; i < n; ++i) {
        nodes_.push_back(make_node(i, setup.can_store[i], setup.services[i], setup.first_broadcast[i]));
        push(setup.first_broadcast[i], Timer{i});
    }
}

void Simulator::push(SimTime at, Payload payload) {
    if (std::holds_alternative<Deliver>(payload) || std::holds_alternative<Discover>(payload) ||
        std::holds_alternative<InjectData>(payload))
        ++in_flight_;
    queue_.push(Event{at, next_seq_++, std::move(payload)});
}

void Simulator::schedule_churn() {
    if (!cfg_.churn_enabled) return;
    for (SimTime t : tick_times(cfg_)) push(t, Churn{});
}

void Simulator::schedule_workload(const std::vector<WorkloadItem>& workload) {
    std::map<std::size_t, std::pair<SimTime, std::vector<std::size_t>>> by_tick;
    for (const auto& item : workload) {
        RequestRecord rec;
        rec.node = item.node;
        rec.tick = item.tick;
        rec.slot = item.slot;
        rec.query = item.query;
        rec.start = item.at;
        records_.push_back(std::move(rec));
        auto& slot = by_tick[item.tick];
        slot.first = item.at;
        slot.second.push_back(records_.size() - 1);
    }
    for (auto& [tick, group] : by_tick) push(group.first, WorkloadTick{tick, std::move(group.second)});
}

std::size_t Simulator::schedule_discovery(SimTime at, NodeId node, ServiceQuery query) {
    RequestRecord rec;
    rec.node = node;
    rec.query = std::move(query);
    rec.start = at;
    records_.push_back(std::move(rec));
    push(at, Discover{records_.size() - 1});
    return records_.size() - 1;
}

void Simulator::schedule_data(SimTime at, NodeId source, NodeId destination, std::string tag) {
    push(at, InjectData{Data{source, destination, std::move(tag)}});
}

void Simulator::break_link(NodeId a, NodeId b) {
    if (!topology_.linked(a, b)) return;
    topology_.unlink(a, b);
    ++epoch(a, b);
    trace("BREAK", "-", std::to_string(std::min(a, b)) + "-" + std::to_string(std::max(a, b)));
    link_down(a, b);
    link_down(b, a);
}

void Simulator::run_until(SimTime horizon) {
    while (!queue_.empty() && queue_.top().at <= horizon) {
        Event ev = queue_.top();
        queue_.pop();
        now_ = ev.at;
        execute(ev);
    }
    now_ = std::max(now_, horizon);
}

bool Simulator::drain(SimTime horizon) {
    while (in_flight_ > 0 && !queue_.empty() && queue_.top().at <= horizon) {
        Event ev = queue_.top();
        queue_.pop();
        now_ = ev.at;
        execute(ev);
    }
    return in_flight_ == 0;
}

MetricsReport Simulator::report() const { return summarize(records_, cfg_.bucket_width, sent_); }

void Simulator::execute(Event& ev) {
    std::visit(overloaded{
                   [&](Deliver& d) {
                       --in_flight_;
                       handle(d);
                   },
                   [&](Timer& t) {
                       NodeState& state = nodes_[t.node];
                       if (state.next_broadcast_at != ev.at) return;  // superseded
                       trace("TIMER", std::to_string(t.node), "seq=" + std::to_string(state.own_seq));
                       apply(t.node, on_timer(state, params_, now_));
                   },
                   [&](Churn&) {
                       const auto step = apply_churn(topology_, cfg_, churn_rng_);
                       std::string detail = "noop";
                       if (step.edge) {
                           detail = (step.action == ChurnStep::Action::Added ? "add " : "remove ") +
                                    std::to_string(step.edge->first) + "-" +
                                    std::to_string(step.edge->second);
                       }
                       trace("CHURN", "-", detail);
                       if (step.action == ChurnStep::Action::Removed) {
                           const auto [a, b] = *step.edge;
                           ++epoch(a, b);
                           link_down(a, b);
                           link_down(b, a);
                       }
                   },
                   [&](WorkloadTick& w) {
                       if (trace_ != nullptr) {
                           std::string detail = "tick=" + std::to_string(w.tick);
                           for (std::size_t r : w.records)
                               detail += " " + std::to_string(records_[r].node) + ":" +
                                         records_[r].query.service_type;
                           trace("WORKLOAD", "-", detail);
                       }
                       for (std::size_t r : w.records) start_discovery(r);
                   },
                   [&](Discover& d) {
                       --in_flight_;
                       trace("DISCOVER", std::to_string(records_[d.record].node),
                             records_[d.record].query.service_type);
                       start_discovery(d.record);
                   },
                   [&](InjectData& inj) {
                       --in_flight_;
                       const NodeId at = inj.data.source;
                       if (trace_ != nullptr) trace("INJECT", std::to_string(at), trace_text(inj.data));
                       const auto effects = forward_data(nodes_[at], params_, inj.data, now_);
                       if (effects.empty()) ++data_dropped_;
                       apply(at, effects, 0);
                   },
               },
               ev.payload);
}

void Simulator::handle(Deliver& d) {
    if (!topology_.linked(d.from, d.to) || epoch(d.from, d.to) != d.link_epoch) {
        if (std::holds_alternative<Data>(d.msg)) ++data_dropped_;
        if (trace_ != nullptr)
            trace("DROP", std::to_string(d.to), "from=" + std::to_string(d.from) + " " + trace_text(d.msg));
        return;
    }
    NodeState& state = nodes_[d.to];
    if (observer_.on_deliver) observer_.on_deliver(d.to, d.from, d.msg, state, now_);
    if (trace_ != nullptr)
        trace("DELIVER", std::to_string(d.to), "from=" + std::to_string(d.from) + " " + trace_text(d.msg));

    const Effects effects = std::visit(
        overloaded{
            [&](const Ust& m) {
                const auto period = params_.broadcast_period.count();
                const Duration jitter{jitter_rng_.between(period / 2, period)};
                return on_ust(state, params_, m, d.from, now_, jitter);
            },
            [&](const Sreq& m) { return on_sreq(state, params_, m, d.from, now_); },
            [&](const Srep& m) { return on_srep(state, params_, m, d.from, now_); },
            [&](const Rerr& m) { return on_rerr(state, params_, m, d.from, now_); },
            [&](const Data& m) {
                // A route loop can only arise from stale state under churn;
                // no real path is longer than the node count.
                if (d.data_hops >= nodes_.size()) return Effects{};
                return forward_data(state, params_, m, now_);
            },
        },
        d.msg);

    if (std::holds_alternative<Data>(d.msg) && effects.empty()) ++data_dropped_;
    apply(d.to, effects, d.data_hops);
}

void Simulator::start_discovery(std::size_t record) {
    RequestRecord& rec = records_[record];
    const Effects effects = begin_discovery(nodes_[rec.node], params_, rec.query, now_);
    for (const auto& e : effects) {
        if (std::holds_alternative<DiscoveryLocalHit>(e)) {
            rec.outcome = Outcome::LocalHit;
            rec.end = now_;
        } else if (const auto* b = std::get_if<Broadcast>(&e)) {
            if (const auto* sreq = std::get_if<Sreq>(&b->msg)) record_of_request_[sreq->request_id] = record;
        }
    }
    apply(rec.node, effects);
}

void Simulator::apply(NodeId node, const Effects& effects, std::uint32_t data_hops) {
    for (const auto& effect : effects) {
        if (observer_.on_effect) observer_.on_effect(node, effect, now_);
        std::visit(overloaded{
                       [&](const Broadcast& b) {
                           count_sent(b.msg);
                           for (NodeId v : topology_.neighbors(node))
                               push(now_ + cfg_.per_hop_delay, Deliver{v, node, b.msg, epoch(node, v), 0});
                       },
                       [&](const Unicast& u) {
                           if (u.to == node || u.to >= nodes_.size()) return;
                           if (!topology_.linked(node, u.to)) {
                               link_down(node, u.to);
                               return;
                           }
                           count_sent(u.msg);
                           const std::uint32_t hops = std::holds_alternative<Data>(u.msg) ? data_hops + 1 : 0;
                           push(now_ + cfg_.per_hop_delay, Deliver{u.to, node, u.msg, epoch(node, u.to), hops});
                       },
                       [&](const DiscoveryCompleted& c) {
                           const auto it = record_of_request_.find(c.request_id);
                           if (it == record_of_request_.end()) return;
                           RequestRecord& rec = records_[it->second];
                           if (rec.outcome != Outcome::Unanswered) return;
                           rec.outcome = Outcome::Completed;
                           rec.end = now_;
                       },
                       [&](const DiscoveryLocalHit&) {},
                       [&](const TimerSet& t) { push(t.at, Timer{node}); },
                       [&](const DataDelivered&) { ++data_delivered_; },
                   },
                   effect);
    }
}

void Simulator::link_down(NodeId node, NodeId lost) {
    trace("LINKDOWN", std::to_string(node), "lost=" + std::to_string(lost));
    apply(node, on_link_down(nodes_[node], params_, lost, now_));
}

void Simulator::count_sent(const Message& msg) { ++sent_[std::string(message_tag(msg))]; }

std::uint64_t& Simulator::epoch(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return link_epochs_[a * nodes_.size() + b];
}

void Simulator::trace(std::string_view kind, const std::string& node, const std::string& detail) {
    if (trace_ == nullptr) return;
    *trace_ << format_seconds(now_) << '|' << kind << '|' << node << '|' << detail << '\n';
}

MetricsReport run(const ScenarioConfig& cfg, const std::vector<WorkloadItem>& workload,
                  std::ostream* trace) {
    Simulator sim(cfg);
    sim.set_trace(trace);
    sim.schedule_churn();
    sim.schedule_workload(workload);
    sim.run_until(cfg.sim_duration);
    return sim.report();
}

MetricsReport run(const ScenarioConfig& cfg, std::ostream* trace) {
    checked(cfg);
    RandomStream workload_rng(cfg.seed, stream::kWorkload);
    return run(cfg, generate_workload(cfg, workload_rng), trace);
}

}  // namespace sdsim
