#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "clusterrep/balancing.hpp"
#include "clusterrep/clustering.hpp"
#include "clusterrep/metrics.hpp"
#include "clusterrep/placement.hpp"
#include "clusterrep/topology.hpp"
#include "clusterrep/workload.hpp"

namespace clusterrep {

struct SimulationConfig {
  TopologyParams topology;
  ClusteringConfig clustering;
  PlacementConfig placement;
  BalancingConfig balancing;
  WorkloadConfig workload;
  double control_delay_ms = 0.0;  // query server / origin server signalling
  bool lb_enabled = true;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Everything fixed at scenario start: the network, clustering and catalog.
struct World {
  Topology topology;
  std::vector<NodeWeight> weights;
  double beta_weight = 0.0;
  Partition partition;
  std::vector<Cluster> clusters;
  ClusterTable table;
  Catalog catalog;
};

/// Builds the world for a config. Streams: topology, then catalog origins,
/// each seeded from derive_seed(cfg.seed, ...).
World build_world(const SimulationConfig& cfg);

/// Assembles a world from given parts (used by tests that pin the topology).
World make_world(Topology topology, const ClusteringConfig& clustering, Catalog catalog);

enum class EventKind {
  QueryArrival,
  TransferComplete,
  ReportTick,
  BalanceTick,
  CleanupTick,
  WindowClose,
  PeerLeave,
  PeerJoin,
  ScenarioEnd,
};

const char* event_name(EventKind k);

struct ResponseDone {
  PeerId responder{};
  PeerId requester{};
  std::uint64_t bytes = 0;
  double arrival_ms = 0.0;
};

struct ReplicaDone {
  ReplicationMove move;
  std::uint64_t bytes = 0;
  std::uint64_t target_epoch = 0;
};

struct Event {
  double time_ms = 0.0;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::ScenarioEnd;
  std::variant<std::monostate, QueryRecord, ResponseDone, ReplicaDone, PeerId> payload;
};

/// JSON-lines sink. Level 0 is silent, 1 records decisions (placement,
/// moves, cleanup, churn, drops), 2 additionally records every dispatched event.
class AuditLog {
 public:
  AuditLog() = default;
  AuditLog(std::ostream* out, int level) : out_(out), level_(level) {}

  bool enabled(int level) const { return out_ != nullptr && level_ >= level; }
  void write(const nlohmann::json& record);

 private:
  std::ostream* out_ = nullptr;
  int level_ = 0;
};

struct LoadSample {
  double tick_ms = 0.0;
  PeerId peer{};
  std::uint64_t load = 0;
};

/// Single-threaded discrete-event engine. Owns all mutable scenario state.
class Simulation {
 public:
  /// Validates the config; throws ConfigError before any event is dispatched.
  Simulation(const World& world, SimulationConfig cfg, AuditLog audit = {});

  /// Dispatches events with time <= t_ms. Returns false once the queue is drained.
  bool run_until(double t_ms);
  /// Runs to completion (including in-flight responses after ScenarioEnd).
  MetricsReport run();

  double now_ms() const { return now_ms_; }
  const World& world() const { return world_; }
  const SimulationConfig& config() const { return cfg_; }
  const ReplicaMap& replicas() const { return replicas_; }
  const QueryServer& query_server() const { return qs_; }
  const ClassMap& class_map() const { return class_map_; }
  std::span<const ReplicationAnnouncement> announcements() const { return announcements_; }
  std::span<const LoadSample> load_trace() const { return load_trace_; }
  bool placement_done() const { return placement_done_; }
  MetricsReport metrics() const;

  /// Reports gathered at the most recent ReportTick, per cluster.
  const std::map<ClusterId, std::vector<LoadReport>>& last_reports() const { return snapshot_.reports; }

  /// Schedules an event. A PeerLeave carrying a PeerId forces that peer out
  /// instead of drawing one.
  void schedule(double time_ms, EventKind kind, decltype(Event::payload) payload = {});
  /// Replication moves go through the same checks and transfers as balancing.
  std::size_t apply_moves(std::span<const ReplicationMove> moves);
  /// Records every (tick, peer, load) at ReportTick.
  void enable_load_trace(bool on) { trace_loads_ = on; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time_ms != b.time_ms ? a.time_ms > b.time_ms : a.sequence > b.sequence;
    }
  };

  struct Snapshot {
    std::map<ClusterId, std::vector<LoadReport>> reports;
    std::map<ClusterId, std::vector<MemberSnapshot>> members;
    std::map<PeerId, HotItemList> hot_per_peer;
    std::map<ClusterId, HotItemList> cluster_hot;
    std::map<ContentId, std::uint64_t> recent;  // per item, cluster-agnostic
  };

  void dispatch(const Event& e);
  void on_query(const QueryRecord& q);
  void on_response(const ResponseDone& r);
  void on_replica(const ReplicaDone& r);
  void on_report_tick();
  void on_balance_tick();
  void on_cleanup_tick();
  void on_window_close();
  void on_peer_leave(std::optional<PeerId> forced);
  void on_peer_join(PeerId p);
  void depart(PeerId p);
  void schedule_next_arrival();
  void schedule_next_leave();
  bool in_window(double t_ms) const { return t_ms >= warmup_ms_; }
  std::size_t pending(PeerId p);
  std::optional<PeerId> hottest_holder(ContentId item, ClusterId cluster) const;
  void audit_move(const ReplicationMove& m, const nlohmann::json& detail);

  const World& world_;
  SimulationConfig cfg_;
  AuditLog audit_;
  double warmup_ms_;
  double end_ms_;

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_sequence_ = 0;
  double now_ms_ = 0.0;
  bool ended_ = false;

  ReplicaMap replicas_;
  QueryServer qs_;
  ClassMap class_map_;
  std::vector<ReplicationAnnouncement> announcements_;
  bool placement_done_ = false;

  QueryGenerator arrivals_;
  Rng churn_rng_;

  std::vector<double> busy_until_;
  std::vector<std::deque<double>> finish_times_;
  std::vector<std::uint64_t> period_load_;
  std::vector<std::map<ContentId, std::uint64_t>> period_hits_;
  std::vector<double> departure_estimate_;
  std::vector<std::uint64_t> epoch_;
  std::set<std::pair<ContentId, PeerId>> in_flight_;
  Snapshot snapshot_;

  bool trace_loads_ = false;
  std::vector<LoadSample> load_trace_;

  // Window accounting.
  std::uint64_t requests_total_ = 0;
  std::uint64_t packets_lost_ = 0;
  std::uint64_t completed_ = 0;
  std::uint64_t bytes_delivered_ = 0;
  double delay_sum_ms_ = 0.0;
  std::uint64_t replication_bytes_ = 0;
  std::uint64_t replication_moves_ = 0;
  std::vector<std::uint64_t> served_in_window_;
};

/// Builds the world from the config and runs it to completion.
MetricsReport run_scenario(const SimulationConfig& cfg, AuditLog audit = {});

/// Topology, clusters, class map, replica map and announcements as JSON.
nlohmann::json dump_state(const Simulation& sim);

}  // namespace clusterrep
