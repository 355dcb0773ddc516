#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "clusterrep/clustering.hpp"
#include "clusterrep/ids.hpp"
#include "clusterrep/topology.hpp"

namespace clusterrep {

enum class ContentClass { Unclassified, Class1, Class2 };

std::string_view class_name(ContentClass c);

struct ContentItem {
  ContentId id{};
  PeerId origin{};
  std::uint64_t size = 1;  // bytes
  ContentClass class_label = ContentClass::Unclassified;
  std::uint64_t access_count_window = 0;
};

using Catalog = std::vector<ContentItem>;

/// Throws LookupError for an id outside the catalog.
const ContentItem& catalog_item(std::span<const ContentItem> catalog, ContentId id);

struct QueryRecord {
  PeerId nid{};
  ContentId ckwd{};
  double time_ms = 0.0;
};

using ClassMap = std::map<ContentId, ContentClass>;

/// Registers client queries and keeps per-item access counts for the current
/// classification window.
class QueryServer {
 public:
  QueryServer(Catalog catalog, ClusterTable cluster_table);

  /// Appends to the log and bumps the item's window count. Throws
  /// QueryMissError for an unknown keyword and leaves the log unchanged.
  void register_query(const QueryRecord& q);

  std::span<const QueryRecord> log() const { return log_; }
  std::span<const ContentItem> catalog() const { return catalog_; }
  const ClusterTable& cluster_table() const { return table_; }
  std::uint64_t window_count(ContentId id) const;

  /// Records the class labels on the catalog.
  void apply_classes(const ClassMap& classes);
  /// Starts a new window: clears the log and the per-item counts.
  void reset_window();

 private:
  Catalog catalog_;
  ClusterTable table_;
  std::vector<QueryRecord> log_;
};

/// Window count >= a_min is Class1, anything else (never queried included) Class2.
ClassMap classify_content(const QueryServer& qs, std::uint64_t a_min);

struct PlacementConfig {
  std::uint64_t a_min = 5;
  std::size_t copies_class1 = 3;
  std::size_t copies_class2 = 1;

  void validate() const;
};

/// One copy of an item held by a peer. `host_weight` is the hosting node's
/// weight, stored with the content when the replica is placed.
struct HostedCopy {
  ContentId item{};
  bool origin = false;
  double host_weight = 0.0;
  std::uint64_t window_accesses = 0;
  double available_at_ms = 0.0;
};

struct PeerStore {
  PeerId peer{};
  std::uint64_t disk_capacity = 0;
  std::uint64_t disk_free = 0;
  std::uint32_t replica_slots = 0;
  bool online = true;
  std::vector<HostedCopy> copies;  // origin copy first when present

  const HostedCopy* find(ContentId id) const;
  HostedCopy* find(ContentId id);
  bool hosts(ContentId id) const { return find(id) != nullptr; }
  std::size_t replica_count() const;
  /// Room for one more replica of `bytes` (disk and slot).
  bool can_accept(std::uint64_t bytes) const;
};

/// Every peer's stored copies. Origin copies are placed at construction and
/// can never be removed.
class ReplicaMap {
 public:
  /// Throws ConfigError when an origin peer cannot fit its own item.
  ReplicaMap(const Topology& t, std::span<const ContentItem> catalog);

  std::size_t size() const { return stores_.size(); }
  const PeerStore& store(PeerId p) const;
  PeerStore& store(PeerId p);
  std::span<const PeerStore> stores() const { return stores_; }

  /// Peers holding the item, ascending id, regardless of availability.
  std::span<const PeerId> holders(ContentId item) const;

  /// False (and no change) if the peer already hosts the item, is offline,
  /// or lacks disk or a free slot.
  bool add_replica(PeerId p, const ContentItem& item, double host_weight, double available_at_ms);
  /// Removes a non-origin copy and returns its bytes to disk_free. Returns
  /// false if there was no such replica.
  bool remove_replica(PeerId p, const ContentItem& item);
  /// Marks a peer offline and drops its replicas; origin copies stay pinned.
  std::vector<ContentId> take_offline(PeerId p, std::span<const ContentItem> catalog);
  void bring_online(PeerId p);

 private:
  void add_holder(ContentId item, PeerId p);
  void remove_holder(ContentId item, PeerId p);

  std::vector<PeerStore> stores_;
  std::vector<std::vector<PeerId>> holders_;
};

struct PlacementShortfall {
  ContentId item{};
  std::size_t requested = 0;
  std::size_t placed = 0;
};

struct PlacementPlan {
  std::map<ContentId, std::vector<PeerId>> assignments;
  ClassMap class_map;
  std::vector<PlacementShortfall> shortfalls;
  std::vector<ContentId> failures;  // requested copies but no eligible target
};

/// Class1 items go to strong-cluster peers, Class2 items to weak-cluster
/// peers. Targets are taken in descending weight order, skipping the origin,
/// peers already holding the item, offline peers and peers without disk or a
/// free slot. Items are planned in ascending id order and the plan reserves
/// capacity as it goes, so it is executable as a whole.
PlacementPlan plan_placement(const ClassMap& classes, std::span<const Cluster> clusters,
                             std::span<const NodeWeight> weights, const ReplicaMap& replicas,
                             std::span<const ContentItem> catalog, const PlacementConfig& cfg);

/// {Nid, Clid, c1, c2, ...}: everything hosted at nid, origin included.
struct ReplicationAnnouncement {
  PeerId nid{};
  ClusterLabel clid = ClusterLabel::Strong;
  std::vector<ContentId> contents;

  bool operator==(const ReplicationAnnouncement&) const = default;
};

struct ReplicaTransfer {
  ContentId item{};
  PeerId source{};
  PeerId target{};
  std::uint64_t bytes = 0;
  double ready_at_ms = 0.0;
};

struct PlacementResult {
  std::vector<ReplicationAnnouncement> announcements;  // one per peer that gained a copy
  std::vector<ReplicaTransfer> transfers;
  std::vector<std::pair<ContentId, PeerId>> skipped;  // copies that no longer fit
};

/// Materializes the plan. Each copy becomes available once its transfer from
/// the origin completes (now_ms + transfer_time).
PlacementResult execute_placement(ReplicaMap& replicas, const PlacementPlan& plan,
                                  std::span<const ContentItem> catalog,
                                  std::span<const NodeWeight> weights, const ClusterTable& table,
                                  const Topology& topology, double now_ms);

/// Announcement for one peer from its current store.
ReplicationAnnouncement announce(const ReplicaMap& replicas, const ClusterTable& table, PeerId p);

/// Strong-cluster holders first, then weak-cluster holders, then the origin.
/// Within a tier the holder with the smallest e2e delay from the requester
/// wins, lowest id on ties. Only online peers whose copy is available at
/// now_ms are candidates. Throws RoutingError when nobody can serve.
PeerId route_query(const QueryRecord& q, const ClusterTable& table, const ReplicaMap& replicas,
                   std::span<const ContentItem> catalog, const Topology& topology, double now_ms);

}  // namespace clusterrep
