#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "clusterrep/ids.hpp"
#include "clusterrep/placement.hpp"

namespace clusterrep {

/// A member's periodic report to its leader: bytes served in the period and
/// free disk space.
struct LoadReport {
  PeerId peer{};
  std::uint64_t load = 0;
  std::uint64_t disk_free = 0;

  bool operator==(const LoadReport&) const = default;
};

/// Items ordered hottest first. Ties go to the lower content id.
struct HotItemList {
  std::vector<ContentId> items;

  bool contains(ContentId id) const;
  bool operator==(const HotItemList&) const = default;
};

HotItemList make_hot_list(std::vector<std::pair<ContentId, std::uint64_t>> counts);

struct BalancingConfig {
  std::uint64_t s_th = 4000;            // disk floor for intra-cluster targets, bytes
  double load_diff_threshold = 1000.0;  // request-bytes per period
  std::uint64_t alpha_cleanup = 1;      // accesses per cleanup window
  double report_period_ms = 1000.0;
  double cleanup_period_ms = 4000.0;
  double imbalance_fraction = 0.10;
  double departure_prob_threshold = 0.3;
  double departure_ewma = 0.2;       // weight of the newest observation
  std::size_t inter_hot_items = 4;   // hot items offered per inter-cluster round

  void validate() const;
};

enum class MoveReason { IntraBalance, InterBalance, Availability };

std::string_view reason_name(MoveReason r);

struct ReplicationMove {
  ContentId item{};
  PeerId source{};
  PeerId target{};
  MoveReason reason = MoveReason::IntraBalance;

  bool operator==(const ReplicationMove&) const = default;
};

/// What a leader knows about one member when deciding replications.
struct MemberSnapshot {
  PeerId peer{};
  std::uint64_t load = 0;
  std::uint64_t disk_free = 0;
  std::size_t free_slots = 0;
  double departure_prob = 0.0;
  std::vector<ContentId> hosted;

  bool hosts(ContentId id) const;
};

/// Deletes every replica at `peer` whose window count is below alpha, then
/// resets the window counters of all copies there. Origin copies stay.
std::vector<ContentId> cleanup_replicas(ReplicaMap& replicas, PeerId peer,
                                        std::span<const ContentItem> catalog,
                                        std::uint64_t alpha_cleanup);

/// For every member at or above the departure threshold (ascending peer id),
/// each hot item it hosts with no other copy in the cluster is replicated to
/// the lowest-loaded other member that can take it.
std::vector<ReplicationMove> availability_replicate(std::span<const MemberSnapshot> members,
                                                    const HotItemList& hot,
                                                    std::span<const ContentItem> catalog,
                                                    const BalancingConfig& cfg);

/// Leader-side intra-cluster pass:
///   1. sort members by load, heaviest first (ascending id on ties);
///   2. drop peers with disk_free < s_th from the last floor(n/2) positions;
///   3. pair the i-th survivor with the i-th from the end;
///   4. for each pair with load gap > load_diff_threshold, replicate the
///      heavy peer's hottest item that the light peer lacks and can fit.
/// `hot_per_peer` lists every item a peer hosts, hottest first.
std::vector<ReplicationMove> intra_cluster_balance(
    std::span<const LoadReport> reports, const std::map<PeerId, HotItemList>& hot_per_peer,
    std::span<const ContentItem> catalog, const BalancingConfig& cfg);

std::uint64_t compute_cluster_load(std::span<const LoadReport> reports);

struct LeaderView {
  ClusterId cluster{};
  std::vector<LoadReport> members;
};

struct WillingLeader {
  ClusterId cluster{};
  std::uint64_t total_load = 0;   // over willing members
  std::uint64_t total_space = 0;  // over willing members
};

struct InterAssignment {
  bool triggered = false;
  double own_load = 0.0;
  double neighbor_avg = 0.0;
  std::vector<WillingLeader> willing;  // least loaded first
  std::vector<std::pair<ContentId, ClusterId>> assignment;
  std::vector<ContentId> unassigned;  // dropped by the space cap
};

/// Triggers when own load exceeds the neighbors' mean by more than
/// imbalance_fraction of that mean. A member is willing when its free space
/// exceeds the smallest hot item; a leader is willing with at least one
/// willing member. Hot items go round-robin over willing leaders in
/// ascending total-load order. An item is left unassigned if it would push
/// the leader past its reported total space.
InterAssignment inter_cluster_balance(const LeaderView& self, std::span<const LeaderView> neighbors,
                                      const HotItemList& hot, std::span<const ContentItem> catalog,
                                      const BalancingConfig& cfg);

/// Places items handed to a receiving cluster: lightest member first, disk
/// and slots permitting, never on a member that already hosts the item.
std::vector<ReplicationMove> place_assigned_items(
    std::span<const std::pair<ContentId, PeerId>> item_and_source,
    std::vector<MemberSnapshot> receivers, std::span<const ContentItem> catalog);

/// Exponentially weighted offline fraction.
double update_departure_estimate(double previous, bool observed_offline, double ewma_weight);

}  // namespace clusterrep
