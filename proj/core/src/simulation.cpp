#include "clusterrep/simulation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "clusterrep/errors.hpp"
#include "clusterrep/rng.hpp"

namespace clusterrep {

namespace {

enum StreamSalt : std::uint64_t { kTopology = 1, kCatalog = 2, kArrivals = 3, kChurn = 4 };

SimulationConfig validated(SimulationConfig cfg) {
  cfg.validate();
  return cfg;
}

nlohmann::json move_json(double t, const ReplicationMove& m) {
  return {{"tick_ms", t},
          {"type", "move"},
          {"reason", std::string(reason_name(m.reason))},
          {"item", index_of(m.item)},
          {"source", index_of(m.source)},
          {"target", index_of(m.target)}};
}

}  // namespace

void SimulationConfig::validate() const {
  topology.validate();
  clustering.validate();
  placement.validate();
  balancing.validate();
  workload.validate();
  if (workload.catalog_size > topology.n_peers) {
    throw ConfigError("catalog_size (" + std::to_string(workload.catalog_size) +
                      ") must not exceed n_peers (" + std::to_string(topology.n_peers) + ")");
  }
  if (!(control_delay_ms >= 0.0)) throw ConfigError("control_delay_ms: must be non-negative");
}

World make_world(Topology topology, const ClusteringConfig& clustering, Catalog catalog) {
  clustering.validate();
  std::vector<NodeWeight> weights = node_weights(topology);
  const double beta = clustering.beta_weight.value_or(median_weight(weights));
  Partition partition = partition_nodes(weights, beta);
  std::vector<Cluster> clusters = form_clusters(partition, clustering.max_cluster_size);
  ClusterTable table(clusters, topology.size());
  for (const ContentItem& c : catalog) topology.peer(c.origin);
  return World{std::move(topology), std::move(weights), beta,           std::move(partition),
               std::move(clusters), std::move(table),   std::move(catalog)};
}

World build_world(const SimulationConfig& cfg) {
  cfg.validate();
  Topology topology = build_topology(cfg.topology, derive_seed(cfg.seed, kTopology));

  // Origins: the first catalog_size entries of a seeded Fisher-Yates shuffle.
  const std::size_t n = topology.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(cfg.seed, kCatalog));
  Catalog catalog;
  for (std::size_t i = 0; i < cfg.workload.catalog_size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(order[i], order[j]);
    catalog.push_back(ContentItem{content_id(i), peer_id(order[i]), cfg.workload.payload_bytes,
                                  ContentClass::Unclassified, 0});
  }
  return make_world(std::move(topology), cfg.clustering, std::move(catalog));
}

const char* event_name(EventKind k) {
  switch (k) {
    case EventKind::QueryArrival: return "QueryArrival";
    case EventKind::TransferComplete: return "TransferComplete";
    case EventKind::ReportTick: return "ReportTick";
    case EventKind::BalanceTick: return "BalanceTick";
    case EventKind::CleanupTick: return "CleanupTick";
    case EventKind::WindowClose: return "WindowClose";
    case EventKind::PeerLeave: return "PeerLeave";
    case EventKind::PeerJoin: return "PeerJoin";
    case EventKind::ScenarioEnd: return "ScenarioEnd";
  }
  return "?";
}

void AuditLog::write(const nlohmann::json& record) {
  if (out_ != nullptr) *out_ << record.dump() << '\n';
}

// ---------------------------------------------------------------------------

Simulation::Simulation(const World& world, SimulationConfig cfg, AuditLog audit)
    : world_(world),
      cfg_(validated(std::move(cfg))),
      audit_(audit),
      warmup_ms_(cfg_.workload.warmup_s * 1000.0),
      end_ms_(cfg_.workload.duration_s * 1000.0),
      replicas_(world.topology, world.catalog),
      qs_(world.catalog, world.table),
      arrivals_(cfg_.workload, world.catalog.size(), world.topology.size(),
                derive_seed(cfg_.seed, kArrivals)),
      churn_rng_(derive_seed(cfg_.seed, kChurn)) {
  const std::size_t n = world_.topology.size();
  busy_until_.assign(n, 0.0);
  finish_times_.assign(n, {});
  period_load_.assign(n, 0);
  period_hits_.assign(n, {});
  departure_estimate_.assign(n, 0.0);
  epoch_.assign(n, 0);
  served_in_window_.assign(n, 0);

  schedule(end_ms_, EventKind::ScenarioEnd);
  schedule(warmup_ms_ + cfg_.control_delay_ms, EventKind::WindowClose);
  schedule(warmup_ms_ + cfg_.balancing.report_period_ms, EventKind::ReportTick);
  schedule(warmup_ms_ + cfg_.balancing.cleanup_period_ms, EventKind::CleanupTick);
  schedule_next_arrival();
  if (cfg_.workload.churn_rate > 0.0) schedule_next_leave();
}

void Simulation::schedule(double time_ms, EventKind kind, decltype(Event::payload) payload) {
  if (time_ms < now_ms_) throw std::logic_error("event scheduled in the past");
  queue_.push(Event{time_ms, next_sequence_++, kind, std::move(payload)});
}

bool Simulation::run_until(double t_ms) {
  while (!queue_.empty() && queue_.top().time_ms <= t_ms) {
    const Event e = queue_.top();
    queue_.pop();
    dispatch(e);
  }
  return !queue_.empty();
}

MetricsReport Simulation::run() {
  while (!queue_.empty()) {
    const Event e = queue_.top();
    queue_.pop();
    dispatch(e);
  }
  return metrics();
}

void Simulation::dispatch(const Event& e) {
  now_ms_ = e.time_ms;
  // After ScenarioEnd only in-flight transfers drain.
  if (ended_ && e.kind != EventKind::TransferComplete) return;
  if (audit_.enabled(2)) {
    audit_.write({{"tick_ms", e.time_ms}, {"type", "event"}, {"seq", e.sequence},
                  {"kind", event_name(e.kind)}});
  }
  switch (e.kind) {
    case EventKind::QueryArrival: on_query(std::get<QueryRecord>(e.payload)); break;
    case EventKind::TransferComplete:
      if (const auto* r = std::get_if<ResponseDone>(&e.payload)) {
        on_response(*r);
      } else {
        on_replica(std::get<ReplicaDone>(e.payload));
      }
      break;
    case EventKind::ReportTick: on_report_tick(); break;
    case EventKind::BalanceTick: on_balance_tick(); break;
    case EventKind::CleanupTick: on_cleanup_tick(); break;
    case EventKind::WindowClose: on_window_close(); break;
    case EventKind::PeerLeave:
      on_peer_leave(std::holds_alternative<PeerId>(e.payload)
                        ? std::optional<PeerId>(std::get<PeerId>(e.payload))
                        : std::nullopt);
      break;
    case EventKind::PeerJoin: on_peer_join(std::get<PeerId>(e.payload)); break;
    case EventKind::ScenarioEnd: ended_ = true; break;
  }
}

void Simulation::schedule_next_arrival() {
  const QueryRecord q = arrivals_.next();
  if (q.time_ms < end_ms_) schedule(q.time_ms, EventKind::QueryArrival, q);
}

void Simulation::schedule_next_leave() {
  const double t = now_ms_ + churn_rng_.exponential(cfg_.workload.churn_rate / 1000.0);
  if (t < end_ms_) schedule(t, EventKind::PeerLeave);
}

std::size_t Simulation::pending(PeerId p) {
  auto& q = finish_times_[index_of(p)];
  while (!q.empty() && q.front() <= now_ms_) q.pop_front();
  return q.size();
}

void Simulation::on_query(const QueryRecord& q) {
  schedule_next_arrival();
  const bool counted = in_window(q.time_ms);
  if (counted) ++requests_total_;

  auto drop = [&](const char* why) {
    if (counted) ++packets_lost_;
    if (audit_.enabled(1)) {
      audit_.write({{"tick_ms", now_ms_}, {"type", "drop"}, {"reason", why},
                    {"item", index_of(q.ckwd)}, {"requester", index_of(q.nid)}});
    }
  };

  try {
    qs_.register_query(q);
  } catch (const QueryMissError&) {
    drop("unknown_content");
    return;
  }

  PeerId responder;
  try {
    responder = route_query(q, world_.table, replicas_, world_.catalog, world_.topology, now_ms_);
  } catch (const RoutingError&) {
    drop("no_holder");
    return;
  }

  const PeerNode& node = world_.topology.peer(responder);
  if (pending(responder) >= node.service_queue_cap) {
    drop("queue_full");
    return;
  }

  const std::size_t r = index_of(responder);
  const std::uint64_t bytes = cfg_.workload.payload_bytes;
  const double start = std::max(now_ms_, busy_until_[r]);
  const double finish = start + serialization_ms(world_.topology, responder, q.nid, bytes);
  busy_until_[r] = finish;
  finish_times_[r].push_back(finish);
  const double done = finish + e2e_delay(world_.topology, responder, q.nid);

  if (HostedCopy* copy = replicas_.store(responder).find(q.ckwd)) ++copy->window_accesses;
  ++period_hits_[r][q.ckwd];

  schedule(done, EventKind::TransferComplete, ResponseDone{responder, q.nid, bytes, q.time_ms});
}

void Simulation::on_response(const ResponseDone& r) {
  period_load_[index_of(r.responder)] += r.bytes;
  if (!in_window(r.arrival_ms)) return;
  ++completed_;
  bytes_delivered_ += r.bytes;
  delay_sum_ms_ += now_ms_ - r.arrival_ms;
  served_in_window_[index_of(r.responder)] += r.bytes;
}

void Simulation::on_window_close() {
  class_map_ = classify_content(qs_, cfg_.placement.a_min);
  qs_.apply_classes(class_map_);
  const PlacementPlan plan = plan_placement(class_map_, world_.clusters, world_.weights, replicas_,
                                            world_.catalog, cfg_.placement);
  PlacementResult result = execute_placement(replicas_, plan, world_.catalog, world_.weights,
                                             world_.table, world_.topology, now_ms_);
  if (audit_.enabled(1)) {
    for (const ReplicaTransfer& t : result.transfers) {
      audit_.write({{"tick_ms", now_ms_}, {"type", "placement"}, {"item", index_of(t.item)},
                    {"source", index_of(t.source)}, {"target", index_of(t.target)},
                    {"class", std::string(class_name(class_map_.at(t.item)))},
                    {"ready_at_ms", t.ready_at_ms}});
    }
    for (ContentId id : plan.failures) {
      audit_.write({{"tick_ms", now_ms_}, {"type", "placement_failure"}, {"item", index_of(id)}});
    }
  }
  for (auto& a : result.announcements) announcements_.push_back(std::move(a));
  qs_.reset_window();
  placement_done_ = true;

  const double period_ms = cfg_.workload.classification_period_s * 1000.0;
  if (period_ms > 0.0 && now_ms_ + period_ms < end_ms_) {
    schedule(now_ms_ + period_ms, EventKind::WindowClose);
  }
}

void Simulation::on_report_tick() {
  const std::size_t n = world_.topology.size();
  for (std::size_t i = 0; i < n; ++i) {
    departure_estimate_[i] = update_departure_estimate(
        departure_estimate_[i], !replicas_.stores()[i].online, cfg_.balancing.departure_ewma);
  }

  snapshot_ = Snapshot{};
  for (const Cluster& c : world_.clusters) {
    auto& reports = snapshot_.reports[c.id];
    auto& members = snapshot_.members[c.id];
    std::map<ContentId, std::uint64_t> cluster_hits;
    for (PeerId m : c.members) {
      const PeerStore& s = replicas_.store(m);
      if (!s.online) continue;
      const std::size_t i = index_of(m);
      reports.push_back({m, period_load_[i], s.disk_free});

      MemberSnapshot snap{m, period_load_[i], s.disk_free, 0, departure_estimate_[i], {}};
      const std::size_t used = s.replica_count();
      snap.free_slots = s.replica_slots > used ? s.replica_slots - used : 0;
      std::vector<std::pair<ContentId, std::uint64_t>> counts;
      for (const HostedCopy& copy : s.copies) {
        snap.hosted.push_back(copy.item);
        auto hit = period_hits_[i].find(copy.item);
        const std::uint64_t k = hit == period_hits_[i].end() ? 0 : hit->second;
        counts.emplace_back(copy.item, k);
        if (k > 0) cluster_hits[copy.item] += k;
      }
      snapshot_.hot_per_peer[m] = make_hot_list(std::move(counts));
      members.push_back(std::move(snap));
    }
    snapshot_.cluster_hot[c.id] = make_hot_list({cluster_hits.begin(), cluster_hits.end()});
  }

  if (trace_loads_) {
    for (std::size_t i = 0; i < n; ++i) load_trace_.push_back({now_ms_, peer_id(i), period_load_[i]});
  }
  std::fill(period_load_.begin(), period_load_.end(), 0);
  for (auto& h : period_hits_) h.clear();

  schedule(now_ms_, EventKind::BalanceTick);
  if (now_ms_ + cfg_.balancing.report_period_ms < end_ms_) {
    schedule(now_ms_ + cfg_.balancing.report_period_ms, EventKind::ReportTick);
  }
}

std::optional<PeerId> Simulation::hottest_holder(ContentId item, ClusterId cluster) const {
  std::optional<PeerId> best;
  std::uint64_t best_load = 0;
  for (const MemberSnapshot& m : snapshot_.members.at(cluster)) {
    if (!m.hosts(item)) continue;
    if (!best || m.load > best_load) {
      best = m.peer;
      best_load = m.load;
    }
  }
  return best;
}

void Simulation::audit_move(const ReplicationMove& m, const nlohmann::json& detail) {
  if (!audit_.enabled(1)) return;
  nlohmann::json j = move_json(now_ms_, m);
  j["trigger"] = detail;
  audit_.write(j);
}

void Simulation::on_balance_tick() {
  if (!cfg_.lb_enabled || !placement_done_) return;
  const BalancingConfig& bc = cfg_.balancing;
  std::vector<ReplicationMove> moves;

  auto load_of = [&](ClusterId c, PeerId p) -> std::uint64_t {
    for (const LoadReport& r : snapshot_.reports.at(c)) {
      if (r.peer == p) return r.load;
    }
    return 0;
  };

  for (const Cluster& c : world_.clusters) {
    for (const ReplicationMove& m : availability_replicate(
             snapshot_.members.at(c.id), snapshot_.cluster_hot.at(c.id), world_.catalog, bc)) {
      audit_move(m, {{"cluster", index_of(c.id)},
                     {"departure_prob", departure_estimate_[index_of(m.source)]}});
      moves.push_back(m);
    }
    for (const ReplicationMove& m : intra_cluster_balance(
             snapshot_.reports.at(c.id), snapshot_.hot_per_peer, world_.catalog, bc)) {
      audit_move(m, {{"cluster", index_of(c.id)},
                     {"source_load", load_of(c.id, m.source)},
                     {"target_load", load_of(c.id, m.target)}});
      moves.push_back(m);
    }
  }

  for (const Cluster& c : world_.clusters) {
    std::vector<LeaderView> neighbors;
    for (ClusterId nb : c.neighbors) neighbors.push_back({nb, snapshot_.reports.at(nb)});
    HotItemList hot = snapshot_.cluster_hot.at(c.id);
    if (hot.items.size() > bc.inter_hot_items) hot.items.resize(bc.inter_hot_items);
    const InterAssignment a = inter_cluster_balance({c.id, snapshot_.reports.at(c.id)}, neighbors,
                                                    hot, world_.catalog, bc);
    if (!a.triggered) continue;
    std::map<ClusterId, std::vector<std::pair<ContentId, PeerId>>> per_dest;
    for (const auto& [item, dest] : a.assignment) {
      if (auto src = hottest_holder(item, c.id)) per_dest[dest].emplace_back(item, *src);
    }
    for (const auto& [dest, items] : per_dest) {
      for (const ReplicationMove& m :
           place_assigned_items(items, snapshot_.members.at(dest), world_.catalog)) {
        audit_move(m, {{"cluster", index_of(c.id)},
                       {"dest_cluster", index_of(dest)},
                       {"cluster_load", a.own_load},
                       {"neighbor_avg", a.neighbor_avg}});
        moves.push_back(m);
      }
    }
  }
  apply_moves(moves);
}

std::size_t Simulation::apply_moves(std::span<const ReplicationMove> moves) {
  std::size_t scheduled = 0;
  for (const ReplicationMove& m : moves) {
    const ContentItem& item = catalog_item(world_.catalog, m.item);
    const PeerStore& src = replicas_.store(m.source);
    const PeerStore& dst = replicas_.store(m.target);
    const bool ok = m.source != m.target && src.online && src.hosts(m.item) && !dst.hosts(m.item) &&
                    dst.can_accept(item.size) && !in_flight_.contains({m.item, m.target});
    if (!ok) {
      if (audit_.enabled(1)) {
        nlohmann::json j = move_json(now_ms_, m);
        j["type"] = "move_rejected";
        audit_.write(j);
      }
      continue;
    }
    in_flight_.insert({m.item, m.target});
    const double ready = now_ms_ + transfer_time(world_.topology, m.source, m.target, item.size);
    schedule(ready, EventKind::TransferComplete,
             ReplicaDone{m, item.size, epoch_[index_of(m.target)]});
    ++scheduled;
  }
  return scheduled;
}

void Simulation::on_replica(const ReplicaDone& r) {
  in_flight_.erase({r.move.item, r.move.target});
  const std::size_t t = index_of(r.move.target);
  bool landed = false;
  if (epoch_[t] == r.target_epoch && replicas_.stores()[t].online) {
    landed = replicas_.add_replica(r.move.target, catalog_item(world_.catalog, r.move.item),
                                   world_.weights[t].value, now_ms_);
  }
  if (landed) {
    replication_bytes_ += r.bytes;
    ++replication_moves_;
  }
  if (audit_.enabled(1)) {
    nlohmann::json j = move_json(now_ms_, r.move);
    j["type"] = landed ? "move_done" : "move_aborted";
    audit_.write(j);
  }
}

void Simulation::on_cleanup_tick() {
  if (cfg_.lb_enabled && placement_done_) {
    for (const PeerStore& s : replicas_.stores()) {
      if (!s.online) continue;
      const PeerId p = s.peer;
      const std::vector<ContentId> gone =
          cleanup_replicas(replicas_, p, world_.catalog, cfg_.balancing.alpha_cleanup);
      if (audit_.enabled(1) && !gone.empty()) {
        nlohmann::json items = nlohmann::json::array();
        for (ContentId id : gone) items.push_back(index_of(id));
        audit_.write({{"tick_ms", now_ms_}, {"type", "cleanup"}, {"peer", index_of(p)},
                      {"items", items}});
      }
    }
  }
  if (now_ms_ + cfg_.balancing.cleanup_period_ms < end_ms_) {
    schedule(now_ms_ + cfg_.balancing.cleanup_period_ms, EventKind::CleanupTick);
  }
}

void Simulation::on_peer_leave(std::optional<PeerId> forced) {
  if (forced) {
    if (replicas_.store(*forced).online) depart(*forced);
    return;
  }
  schedule_next_leave();

  std::vector<bool> is_origin(world_.topology.size(), false);
  for (const ContentItem& c : world_.catalog) is_origin[index_of(c.origin)] = true;

  std::vector<PeerId> eligible;
  double total = 0.0;
  for (const PeerStore& s : replicas_.stores()) {
    if (!s.online) continue;
    if (cfg_.workload.churn_exempt_origins && is_origin[index_of(s.peer)]) continue;
    eligible.push_back(s.peer);
    total += world_.topology.peer(s.peer).departure_prob;
  }
  if (eligible.empty()) return;

  PeerId leaving = eligible.front();
  const double u = churn_rng_.uniform01();
  if (total > 0.0) {
    double acc = 0.0;
    for (PeerId p : eligible) {
      acc += world_.topology.peer(p).departure_prob / total;
      leaving = p;
      if (u < acc) break;
    }
  } else {
    leaving = eligible[static_cast<std::size_t>(u * static_cast<double>(eligible.size()))];
  }

  depart(leaving);
}

void Simulation::depart(PeerId leaving) {
  const std::vector<ContentId> dropped = replicas_.take_offline(leaving, world_.catalog);
  ++epoch_[index_of(leaving)];
  if (audit_.enabled(1)) {
    nlohmann::json items = nlohmann::json::array();
    for (ContentId id : dropped) items.push_back(index_of(id));
    audit_.write({{"tick_ms", now_ms_}, {"type", "leave"}, {"peer", index_of(leaving)},
                  {"dropped", items}});
  }
  schedule(now_ms_ + cfg_.workload.rejoin_delay_s * 1000.0, EventKind::PeerJoin, leaving);
}

void Simulation::on_peer_join(PeerId p) {
  replicas_.bring_online(p);
  if (audit_.enabled(1)) {
    audit_.write({{"tick_ms", now_ms_}, {"type", "join"}, {"peer", index_of(p)}});
  }
}

MetricsReport Simulation::metrics() const {
  MetricsReport m;
  m.window_s = (end_ms_ - warmup_ms_) / 1000.0;
  m.requests_total = requests_total_;
  m.packets_lost = packets_lost_;
  m.requests_completed = completed_;
  m.bytes_delivered = bytes_delivered_;
  m.mean_delay_ms = completed_ > 0 ? delay_sum_ms_ / static_cast<double>(completed_) : 0.0;
  m.aggregate_throughput_bps = static_cast<double>(bytes_delivered_) * 8.0 / m.window_s;
  m.replication_bytes_moved = replication_bytes_;
  m.replication_moves = replication_moves_;
  m.per_peer_load = served_in_window_;
  return m;
}

MetricsReport run_scenario(const SimulationConfig& cfg, AuditLog audit) {
  const World world = build_world(cfg);
  Simulation sim(world, cfg, audit);
  return sim.run();
}

// ---------------------------------------------------------------------------

nlohmann::json dump_state(const Simulation& sim) {
  using nlohmann::json;
  const World& w = sim.world();
  const Topology& t = w.topology;

  std::vector<bool> is_leader(t.size(), false);
  for (const Cluster& c : w.clusters) is_leader[index_of(c.leader)] = true;

  json peers = json::array();
  for (const PeerNode& p : t.peers()) {
    const AccessLink& a = t.access(p.id);
    peers.push_back({{"id", index_of(p.id)},
                     {"up_bw", p.up_bw},
                     {"cpu", p.cpu},
                     {"mem", p.mem},
                     {"access_latency", p.access_latency},
                     {"raw_up_bps", p.raw_up_bps},
                     {"raw_down_bps", p.raw_down_bps},
                     {"disk_capacity", p.disk_capacity},
                     {"replica_slots", p.replica_slots},
                     {"departure_prob", p.departure_prob},
                     {"service_queue_cap", p.service_queue_cap},
                     {"router", t.router_of(p.id)},
                     {"up_delay_ms", a.up_delay_ms},
                     {"down_delay_ms", a.down_delay_ms},
                     {"weight", w.weights[index_of(p.id)].value},
                     {"cluster", index_of(w.table.cluster(p.id))},
                     {"label", std::string(label_code(w.table.label(p.id)))},
                     {"leader", static_cast<bool>(is_leader[index_of(p.id)])}});
  }
  json matrix = json::array();
  for (std::size_t a = 0; a < t.overlay().size(); ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < t.overlay().size(); ++b) row.push_back(t.overlay().at(a, b));
    matrix.push_back(std::move(row));
  }

  json clusters = json::array();
  for (const Cluster& c : w.clusters) {
    json members = json::array(), neighbors = json::array();
    for (PeerId m : c.members) members.push_back(index_of(m));
    for (ClusterId nb : c.neighbors) neighbors.push_back(index_of(nb));
    clusters.push_back({{"id", index_of(c.id)},
                        {"label", std::string(label_code(c.label))},
                        {"leader", index_of(c.leader)},
                        {"members", members},
                        {"neighbors", neighbors}});
  }

  json catalog = json::array();
  for (const ContentItem& c : w.catalog) {
    auto cls = sim.class_map().find(c.id);
    catalog.push_back({{"id", index_of(c.id)},
                       {"origin", index_of(c.origin)},
                       {"size", c.size},
                       {"class", std::string(class_name(cls == sim.class_map().end()
                                                            ? ContentClass::Unclassified
                                                            : cls->second))}});
  }

  json stores = json::array();
  json announcements = json::array();
  for (const PeerStore& s : sim.replicas().stores()) {
    json copies = json::array();
    for (const HostedCopy& c : s.copies) {
      copies.push_back({{"item", index_of(c.item)},
                        {"origin", c.origin},
                        {"host_weight", c.host_weight},
                        {"available_at_ms", c.available_at_ms},
                        {"window_accesses", c.window_accesses}});
    }
    stores.push_back({{"peer", index_of(s.peer)},
                      {"online", s.online},
                      {"disk_capacity", s.disk_capacity},
                      {"disk_free", s.disk_free},
                      {"replica_slots", s.replica_slots},
                      {"copies", copies}});
    const ReplicationAnnouncement a = announce(sim.replicas(), w.table, s.peer);
    json contents = json::array();
    for (ContentId id : a.contents) contents.push_back(index_of(id));
    announcements.push_back({{"nid", index_of(a.nid)},
                             {"clid", std::string(label_code(a.clid))},
                             {"contents", contents}});
  }

  return {{"time_ms", sim.now_ms()},
          {"seed", sim.config().seed},
          {"beta_weight", w.beta_weight},
          {"topology", {{"peers", peers}, {"overlay_delay_ms", matrix}}},
          {"clusters", clusters},
          {"catalog", catalog},
          {"replica_map", stores},
          {"announcements", announcements}};
}

}  // namespace clusterrep
