#include "dvsim/simulation.hpp"

#include <algorithm>
#include <ostream>

#include "dvsim/text.hpp"

namespace dvsim {

Simulation::Node::Node(NodeId id, std::size_t n, Comparator cmp, const EstimatorParams& ep)
    : table(id, n, cmp) {
  links.reserve(n);
  for (NodeId j = 0; j < n; ++j) links.emplace_back(j, ep);
}

Simulation::Simulation(const Topology& topology, MetricKind metric, SimParams params,
                       std::vector<CbrFlow> flows, std::uint64_t seed)
    : topology_(topology),
      metric_(metric),
      params_(std::move(params)),
      flows_(std::move(flows)),
      seed_(seed),
      channel_(topology, engine_, seed) {
  const std::size_t n = topology.size();
  nodes_.reserve(n);
  for (NodeId i = 0; i < n; ++i) {
    nodes_.emplace_back(i, n, comparator_for(metric), params_.estimator);
    auto& node = nodes_.back();
    node.timers = make_stream(seed, i, Stream::kTimers);
    Rng clock = make_stream(seed, i, Stream::kClock);
    node.clock_offset = SimTime::from_seconds(uniform01(clock) * params_.clock_offset_max_s);
  }
  stats_.warmup = params_.warmup;
  stats_.packet_size = flows_.empty() ? 640 : flows_.front().packet_size;
  channel_.set_receiver([this](NodeId to, const PacketPtr& p) { on_receive(to, p); });
}

void Simulation::set_trace(std::ostream* trace) {
  trace_ = trace;
  channel_.set_trace(trace);
}

void Simulation::set_estimate_log(std::ostream* log, SimTime interval) {
  estimate_log_ = log;
  estimate_interval_ = interval;
}

void Simulation::periodic(SimTime at, SimTime period, std::function<void()> fn) {
  engine_.schedule(at, [this, at, period, fn = std::move(fn)]() mutable {
    fn();
    periodic(at + period, period, std::move(fn));
  });
}

void Simulation::start() {
  started_ = true;
  const auto& ep = params_.estimator;
  // Random phases in (0, period] keep nodes from firing in lockstep.
  auto phase = [](Rng& rng, SimTime period) {
    return SimTime::from_ns(1 + static_cast<std::int64_t>(uniform01(rng) * (period.ns() - 1)));
  };

  for (NodeId i = 0; i < nodes_.size(); ++i) {
    Rng& rng = nodes_[i].timers;
    periodic(phase(rng, params_.full_dump_period), params_.full_dump_period,
             [this, i] { on_full_dump_timer(i); });
    periodic(phase(rng, ep.probe_period), ep.probe_period, [this, i] { on_probe_timer(i); });
    if (metric_ == MetricKind::kEtt) {
      // First cycle after one probe window, so neighbors are known by then.
      SimTime first = phase(rng, params_.pair_interval);
      if (params_.pair_interval > ep.window) {
        first = ep.window + SimTime::from_ns(static_cast<std::int64_t>(
                                uniform01(rng) * (params_.pair_interval - ep.window).ns()));
      }
      periodic(first, params_.pair_interval, [this, i] { on_pair_timer(i); });
    }
    if (metric_ == MetricKind::kMd) {
      periodic(phase(rng, ep.md_pair_interval), ep.md_pair_interval,
               [this, i] { on_md_pair_timer(i); });
    }
  }

  for (std::size_t f = 0; f < flows_.size(); ++f) {
    const auto& flow = flows_[f];
    Rng rng = make_stream(seed_, f, Stream::kTraffic);
    const SimTime interval = SimTime::from_seconds(1.0 / flow.rate);
    const SimTime first =
        flow.start + SimTime::from_ns(static_cast<std::int64_t>(uniform01(rng) * interval.ns()));
    if (first > flow.stop) continue;
    engine_.schedule(first, [this, f, interval] {
      originate(f);
      // Chain the next packet while the flow is active.
      struct Next {
        Simulation* sim;
        std::size_t f;
        SimTime interval;
        void operator()() const {
          if (sim->engine_.now() + interval > sim->flows_[f].stop) return;
          sim->engine_.schedule_in(interval, [s = *this] {
            s.sim->originate(s.f);
            s();
          });
        }
      };
      Next{this, f, interval}();
    });
  }

  if (estimate_log_ && estimate_interval_.ns() > 0) {
    *estimate_log_ << "time,node,neighbor,d_f,d_r,estimated_B,md_delay\n";
    periodic(estimate_interval_, estimate_interval_, [this] { log_estimates(); });
  }
}

void Simulation::run_until(SimTime t) {
  if (!started_) start();
  engine_.run_until(t);
}

void Simulation::run() {
  run_until(params_.duration);
  finalize();
}

void Simulation::finalize() {
  if (finalized_) return;
  finalized_ = true;
  stats_.drops[static_cast<std::size_t>(DropCause::kInFlight)] += in_flight_;
  in_flight_ = 0;
}

PacketPtr Simulation::make_packet(PacketKind kind, std::uint32_t size, NodeId src, NodeId dst,
                                  Payload payload) {
  auto p = std::make_shared<Packet>();
  p->kind = kind;
  p->size = size;
  p->src = src;
  p->dst = dst;
  p->created_at = engine_.now();
  p->uid = next_uid_++;
  p->payload = std::move(payload);
  return p;
}

void Simulation::send_routing(PacketPtr packet, bool broadcast, std::uint32_t after_bytes) {
  stats_.record_routing(packet->kind, engine_.now());
  if (broadcast) {
    channel_.broadcast(packet, after_bytes);
  } else {
    channel_.unicast(packet, after_bytes);
  }
}

std::uint32_t Simulation::update_size(const std::vector<RouteAdvert>& entries) const {
  std::uint32_t size = kHeaderBytes;
  for (const auto& e : entries) {
    size += kRouteEntryBytes + 4 * static_cast<std::uint32_t>(e.path.size());
  }
  return size;
}

MetricValue Simulation::link_cost(NodeId node, NodeId neighbor) {
  return link_metric(metric_, nodes_.at(node).links.at(neighbor), engine_.now(),
                     params_.estimator);
}

// --- Timers -----------------------------------------------------------------

void Simulation::on_probe_timer(NodeId node) {
  auto& n = nodes_[node];
  ++n.probe_fires;
  const SimTime now = engine_.now();
  if (uses_delivery_probes(metric_)) {
    ProbePayload payload;
    for (auto& est : n.links) {
      if (!est.heard) continue;
      const auto c = est.probes.count(now);
      if (c > 0) payload.heard.emplace_back(est.neighbor, static_cast<std::uint32_t>(c));
    }
    const auto size =
        kHeaderBytes + kProbeEntryBytes * static_cast<std::uint32_t>(payload.heard.size());
    send_routing(make_packet(PacketKind::kMetricProbe, size, node, kBroadcast, std::move(payload)),
                 true);
  }
  check_links(node);
}

void Simulation::on_full_dump_timer(NodeId node) {
  auto& n = nodes_[node];
  ++n.dump_fires;
  n.table.bump_own_seq(engine_.now());
  auto entries = n.table.full_dump();
  const auto size = update_size(entries);
  send_routing(make_packet(PacketKind::kRouteUpdateFull, size, node, kBroadcast,
                           RouteUpdatePayload{std::move(entries)}),
               true);
}

void Simulation::on_pair_timer(NodeId node) {
  auto& n = nodes_[node];
  const SimTime now = engine_.now();
  for (auto& est : n.links) {
    if (!est.heard || est.probes.count(now) == 0) continue;
    const std::uint64_t pair_id = next_uid_;
    const PairPayload payload{pair_id, local_time(node)};
    send_routing(make_packet(PacketKind::kPairProbeSmall, kPairSmallBytes, node, est.neighbor,
                             payload),
                 false);
    send_routing(make_packet(PacketKind::kPairProbeLarge, kPairLargeBytes, node, est.neighbor,
                             payload),
                 false, kPairSmallBytes);
  }
}

void Simulation::on_md_pair_timer(NodeId node) {
  const std::uint64_t pair_id = next_uid_;
  const PairPayload payload{pair_id, local_time(node)};
  send_routing(make_packet(PacketKind::kPairProbeSmall, kPairSmallBytes, node, kBroadcast,
                           payload),
               true);
  send_routing(make_packet(PacketKind::kPairProbeLarge, kPairLargeBytes, node, kBroadcast,
                           payload),
               true, kPairSmallBytes);
}

void Simulation::check_links(NodeId node) {
  auto& n = nodes_[node];
  std::vector<bool> via(nodes_.size(), false);
  for (NodeId d = 0; d < nodes_.size(); ++d) {
    const auto& e = n.table.entry(d);
    if (e && d != node && e->valid()) via[e->next_hop] = true;
  }
  for (NodeId nb = 0; nb < nodes_.size(); ++nb) {
    if (!via[nb]) continue;
    if (!link_cost(node, nb).usable()) on_link_break(node, nb);
  }
}

void Simulation::on_link_break(NodeId node, NodeId neighbor) {
  auto& n = nodes_[node];
  if (!n.table.has_active_route_via(neighbor)) return;
  n.table.mark_broken_via(neighbor, engine_.now());
  request_incremental(node);
}

void Simulation::request_incremental(NodeId node) {
  auto& n = nodes_[node];
  if (n.incremental_pending) return;
  const SimTime now = engine_.now();
  const SimTime earliest =
      n.last_incremental ? *n.last_incremental + params_.incremental_min_interval : now;
  if (earliest <= now) {
    send_incremental(node);
    return;
  }
  n.incremental_pending = true;
  engine_.schedule(earliest, [this, node] {
    nodes_[node].incremental_pending = false;
    send_incremental(node);
  });
}

void Simulation::send_incremental(NodeId node) {
  auto& n = nodes_[node];
  auto entries = n.table.incremental_dump();
  if (entries.empty()) return;
  n.last_incremental = engine_.now();
  const auto size = update_size(entries);
  send_routing(make_packet(PacketKind::kRouteUpdateIncremental, size, node, kBroadcast,
                           RouteUpdatePayload{std::move(entries)}),
               true);
}

void Simulation::log_estimates() {
  const SimTime now = engine_.now();
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    for (auto& est : nodes_[i].links) {
      if (!est.heard) continue;
      const auto bw = est.estimated_bandwidth();
      const auto md = md_link_delay(est.md_dispersion.samples());
      *estimate_log_ << now << ',' << i << ',' << est.neighbor << ','
                     << text::format_double(est.d_f(now)) << ','
                     << text::format_double(est.d_r(now)) << ','
                     << (bw ? text::format_double(*bw) : "") << ','
                     << (md.usable() ? text::format_double(md.value) : "") << '\n';
    }
  }
}

// --- Reception ----------------------------------------------------------------

void Simulation::on_receive(NodeId to, const PacketPtr& packet) {
  auto& n = nodes_[to];
  auto& est = n.links[packet->src];
  est.heard = true;
  const SimTime now = engine_.now();

  switch (packet->kind) {
    case PacketKind::kMetricProbe: {
      est.probes.record(now);
      const auto& heard = std::get<ProbePayload>(packet->payload).heard;
      const auto it = std::find_if(heard.begin(), heard.end(),
                                   [to](const auto& h) { return h.first == to; });
      const double count = it == heard.end() ? 0.0 : static_cast<double>(it->second);
      est.piggyback_df = std::clamp(count / est.probes.expected(), 0.0, 1.0);
      est.piggyback_at = now;
      break;
    }
    case PacketKind::kRouteUpdateFull:
    case PacketKind::kRouteUpdateIncremental:
      est.updates.record(now);
      on_route_update(to, packet);
      break;
    case PacketKind::kPairProbeSmall:
      est.pending_pair = std::get<PairPayload>(packet->payload).pair_id;
      est.pending_first = local_time(to);
      if (metric_ == MetricKind::kMd) est.md_pairs.record(now);
      break;
    case PacketKind::kPairProbeLarge: {
      const auto& pair = std::get<PairPayload>(packet->payload);
      if (est.pending_pair != pair.pair_id) break;
      est.pending_pair.reset();
      const auto dispersion = md_dispersion(est.pending_first, local_time(to));
      if (!dispersion) break;
      if (metric_ == MetricKind::kMd) {
        est.md_dispersion.push(*dispersion);
      } else {
        send_routing(make_packet(PacketKind::kPairAck, kPairAckBytes, to, packet->src,
                                 PairAckPayload{pair.pair_id, *dispersion}),
                     false);
      }
      break;
    }
    case PacketKind::kPairAck:
      est.pair_dispersion.push(std::get<PairAckPayload>(packet->payload).dispersion);
      break;
    case PacketKind::kData:
      on_data(to, packet);
      break;
  }
}

void Simulation::on_route_update(NodeId node, const PacketPtr& packet) {
  auto& n = nodes_[node];
  const auto& entries = std::get<RouteUpdatePayload>(packet->payload).entries;
  stats_.route_computations += entries.size();
  const NodeId from = packet->src;

  auto apply = [this, node, from, packet] {
    auto& nd = nodes_[node];
    const auto& adv = std::get<RouteUpdatePayload>(packet->payload).entries;
    const MetricValue link = link_cost(node, from);
    const auto result = nd.table.apply_update(from, link.value, adv, engine_.now());
    if (result.newly_broken > 0) request_incremental(node);
  };

  const SimTime now = engine_.now();
  const SimTime cost = SimTime::from_seconds(
      params_.computation_delay_s[static_cast<std::size_t>(metric_)] *
      static_cast<double>(entries.size()));
  const SimTime begin = std::max(now, n.busy_until);
  const SimTime finish = begin + cost;
  n.busy_until = finish;
  if (finish == now) {
    apply();
  } else {
    engine_.schedule(finish, std::move(apply));
  }
}

// --- Data path ------------------------------------------------------------------

void Simulation::originate(std::size_t flow_index) {
  const auto& flow = flows_[flow_index];
  const SimTime now = engine_.now();
  DataPayload data;
  data.id = next_uid_++;
  data.origin = flow.src;
  data.final_dst = flow.dst;
  data.flow = static_cast<std::uint32_t>(flow_index);
  data.sent_at = now;
  data.ttl = params_.ttl;
  ++stats_.data_sent;
  if (now >= stats_.warmup) ++stats_.steady_sent;
  ++in_flight_;
  nodes_[flow.src].seen.insert(data.id);
  route_data(flow.src, data);
}

void Simulation::route_data(NodeId node, DataPayload data) {
  if (node == data.final_dst) {
    deliver(node, data);
    return;
  }
  const SimTime busy = nodes_[node].busy_until;
  if (busy > engine_.now()) {
    engine_.schedule(busy, [this, node, data] { forward_now(node, data); });
  } else {
    forward_now(node, data);
  }
}

void Simulation::forward_now(NodeId node, DataPayload data) {
  const auto next = nodes_[node].table.next_hop(data.final_dst);
  if (!next) {
    drop(data, DropCause::kNoRoute, node);
    return;
  }
  if (data.ttl <= 0) {
    drop(data, DropCause::kTtl, node);
    return;
  }
  --data.ttl;
  const std::uint32_t size = flows_.empty() ? 640 : flows_[data.flow].packet_size;
  auto packet = make_packet(PacketKind::kData, size, node, *next, data);
  const auto outcome = channel_.send_reliable(packet, params_.retry_limit);
  if (!outcome.delivered) {
    drop(data,
         topology_.in_range(node, *next) ? DropCause::kRetryExhausted : DropCause::kNotNeighbor,
         node);
  }
}

void Simulation::on_data(NodeId node, const PacketPtr& packet) {
  const auto& data = std::get<DataPayload>(packet->payload);
  if (node == data.final_dst) {
    deliver(node, data);
    return;
  }
  if (!nodes_[node].seen.insert(data.id).second) {
    drop(data, DropCause::kLoop, node);
    return;
  }
  route_data(node, data);
}

void Simulation::deliver(NodeId node, const DataPayload& data) {
  const SimTime now = engine_.now();
  if (data.echo) {
    stats_.round_trips.push_back(now - data.sent_at);
    return;
  }
  ++stats_.data_delivered;
  --in_flight_;
  if (data.sent_at >= stats_.warmup) ++stats_.steady_delivered;
  stats_.delays.push_back({data.id, data.sent_at, now});
  if (params_.rtt) {
    DataPayload echo = data;
    echo.id = next_uid_++;
    echo.origin = node;
    echo.final_dst = data.origin;
    echo.ttl = params_.ttl;
    echo.echo = true;
    nodes_[node].seen.insert(echo.id);
    route_data(node, echo);
  }
}

void Simulation::drop(const DataPayload& data, DropCause cause, NodeId at) {
  if (trace_) {
    *trace_ << engine_.now() << " Data " << at << ' ' << data.final_dst << ' ' << data.id << ' '
            << to_string(cause) << '\n';
  }
  if (data.echo) {
    ++stats_.echoes_lost;
    return;
  }
  stats_.record_drop(cause);
  --in_flight_;
}

void Simulation::dump_tables(std::ostream& os) const {
  for (const auto& n : nodes_) n.table.dump(os, engine_.now());
}

}  // namespace dvsim
