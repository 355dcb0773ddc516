#include "clusterrep/balancing.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "clusterrep/errors.hpp"

namespace clusterrep {

bool HotItemList::contains(ContentId id) const {
  return std::find(items.begin(), items.end(), id) != items.end();
}

HotItemList make_hot_list(std::vector<std::pair<ContentId, std::uint64_t>> counts) {
  std::sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  HotItemList out;
  out.items.reserve(counts.size());
  for (const auto& [id, n] : counts) out.items.push_back(id);
  return out;
}

void BalancingConfig::validate() const {
  if (s_th == 0) throw ConfigError("s_th: must be positive");
  if (!(load_diff_threshold > 0.0)) throw ConfigError("load_diff_threshold: must be positive");
  if (alpha_cleanup == 0) throw ConfigError("alpha_cleanup: must be positive");
  if (!(report_period_ms > 0.0)) throw ConfigError("report_period_ms: must be positive");
  if (!(cleanup_period_ms > 0.0)) throw ConfigError("cleanup_period_ms: must be positive");
  if (!(imbalance_fraction > 0.0 && imbalance_fraction < 1.0)) {
    throw ConfigError("imbalance_fraction: must lie in (0, 1)");
  }
  if (!(departure_prob_threshold > 0.0)) {
    throw ConfigError("departure_prob_threshold: must be positive");
  }
  if (!(departure_ewma > 0.0 && departure_ewma <= 1.0)) {
    throw ConfigError("departure_ewma: must lie in (0, 1]");
  }
}

std::string_view reason_name(MoveReason r) {
  switch (r) {
    case MoveReason::IntraBalance: return "IntraBalance";
    case MoveReason::InterBalance: return "InterBalance";
    case MoveReason::Availability: return "Availability";
  }
  return "?";
}

bool MemberSnapshot::hosts(ContentId id) const {
  return std::find(hosted.begin(), hosted.end(), id) != hosted.end();
}

std::vector<ContentId> cleanup_replicas(ReplicaMap& replicas, PeerId peer,
                                        std::span<const ContentItem> catalog,
                                        std::uint64_t alpha_cleanup) {
  std::vector<ContentId> cold;
  for (const HostedCopy& c : replicas.store(peer).copies) {
    if (!c.origin && c.window_accesses < alpha_cleanup) cold.push_back(c.item);
  }
  for (ContentId id : cold) replicas.remove_replica(peer, catalog_item(catalog, id));
  for (HostedCopy& c : replicas.store(peer).copies) c.window_accesses = 0;
  return cold;
}

std::vector<ReplicationMove> availability_replicate(std::span<const MemberSnapshot> members,
                                                    const HotItemList& hot,
                                                    std::span<const ContentItem> catalog,
                                                    const BalancingConfig& cfg) {
  std::vector<MemberSnapshot> state(members.begin(), members.end());
  std::sort(state.begin(), state.end(),
            [](const MemberSnapshot& a, const MemberSnapshot& b) { return a.peer < b.peer; });

  std::vector<ReplicationMove> moves;
  for (std::size_t r = 0; r < state.size(); ++r) {
    if (state[r].departure_prob < cfg.departure_prob_threshold) continue;
    for (ContentId item : hot.items) {
      if (!state[r].hosts(item)) continue;
      const bool covered = std::any_of(state.begin(), state.end(), [&](const MemberSnapshot& m) {
        return m.peer != state[r].peer && m.hosts(item);
      });
      if (covered) continue;

      const std::uint64_t size = catalog_item(catalog, item).size;
      std::optional<std::size_t> target;
      for (std::size_t t = 0; t < state.size(); ++t) {
        const MemberSnapshot& m = state[t];
        if (t == r || m.disk_free < size || m.free_slots == 0) continue;
        if (!target || m.load < state[*target].load) target = t;
      }
      if (!target) continue;
      moves.push_back({item, state[r].peer, state[*target].peer, MoveReason::Availability});
      state[*target].disk_free -= size;
      --state[*target].free_slots;
      state[*target].hosted.push_back(item);
    }
  }
  return moves;
}

std::vector<ReplicationMove> intra_cluster_balance(
    std::span<const LoadReport> reports, const std::map<PeerId, HotItemList>& hot_per_peer,
    std::span<const ContentItem> catalog, const BalancingConfig& cfg) {
  std::vector<LoadReport> list(reports.begin(), reports.end());
  std::sort(list.begin(), list.end(), [](const LoadReport& a, const LoadReport& b) {
    return a.load != b.load ? a.load > b.load : a.peer < b.peer;
  });

  const std::size_t n = list.size();
  const std::size_t tail_begin = n - n / 2;
  std::vector<LoadReport> survivors(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(tail_begin));
  for (std::size_t i = tail_begin; i < n; ++i) {
    if (list[i].disk_free >= cfg.s_th) survivors.push_back(list[i]);
  }

  std::vector<ReplicationMove> moves;
  if (survivors.size() < 2) return moves;

  static const HotItemList kNone;
  auto hot_of = [&](PeerId p) -> const HotItemList& {
    auto it = hot_per_peer.find(p);
    return it == hot_per_peer.end() ? kNone : it->second;
  };

  for (std::size_t i = 0, j = survivors.size() - 1; i < j; ++i, --j) {
    const LoadReport& heavy = survivors[i];
    const LoadReport& light = survivors[j];
    const double gap = static_cast<double>(heavy.load) - static_cast<double>(light.load);
    if (!(gap > cfg.load_diff_threshold)) continue;
    const HotItemList& target_has = hot_of(light.peer);
    for (ContentId item : hot_of(heavy.peer).items) {
      if (target_has.contains(item)) continue;
      if (catalog_item(catalog, item).size > light.disk_free) continue;
      moves.push_back({item, heavy.peer, light.peer, MoveReason::IntraBalance});
      break;
    }
  }
  return moves;
}

std::uint64_t compute_cluster_load(std::span<const LoadReport> reports) {
  std::uint64_t total = 0;
  for (const LoadReport& r : reports) total += r.load;
  return total;
}

InterAssignment inter_cluster_balance(const LeaderView& self, std::span<const LeaderView> neighbors,
                                      const HotItemList& hot, std::span<const ContentItem> catalog,
                                      const BalancingConfig& cfg) {
  InterAssignment out;
  out.own_load = static_cast<double>(compute_cluster_load(self.members));
  if (neighbors.empty()) return out;

  double sum = 0.0;
  for (const LeaderView& n : neighbors) sum += static_cast<double>(compute_cluster_load(n.members));
  out.neighbor_avg = sum / static_cast<double>(neighbors.size());
  out.triggered = (out.own_load - out.neighbor_avg) > out.neighbor_avg * cfg.imbalance_fraction;
  if (!out.triggered || hot.items.empty()) return out;

  std::uint64_t min_size = std::numeric_limits<std::uint64_t>::max();
  for (ContentId id : hot.items) min_size = std::min(min_size, catalog_item(catalog, id).size);

  for (const LeaderView& n : neighbors) {
    WillingLeader w{n.cluster, 0, 0};
    bool any = false;
    for (const LoadReport& m : n.members) {
      if (m.disk_free > min_size) {
        any = true;
        w.total_load += m.load;
        w.total_space += m.disk_free;
      }
    }
    if (any) out.willing.push_back(w);
  }
  std::sort(out.willing.begin(), out.willing.end(),
            [](const WillingLeader& a, const WillingLeader& b) {
              return a.total_load != b.total_load ? a.total_load < b.total_load
                                                  : a.cluster < b.cluster;
            });
  if (out.willing.empty()) {
    out.unassigned = hot.items;
    return out;
  }

  std::vector<std::uint64_t> space_left;
  for (const WillingLeader& w : out.willing) space_left.push_back(w.total_space);
  for (std::size_t i = 0; i < hot.items.size(); ++i) {
    const std::size_t slot = i % out.willing.size();
    const std::uint64_t size = catalog_item(catalog, hot.items[i]).size;
    if (size > space_left[slot]) {
      out.unassigned.push_back(hot.items[i]);
      continue;
    }
    space_left[slot] -= size;
    out.assignment.emplace_back(hot.items[i], out.willing[slot].cluster);
  }
  return out;
}

std::vector<ReplicationMove> place_assigned_items(
    std::span<const std::pair<ContentId, PeerId>> item_and_source,
    std::vector<MemberSnapshot> receivers, std::span<const ContentItem> catalog) {
  std::vector<ReplicationMove> moves;
  for (const auto& [item, source] : item_and_source) {
    const std::uint64_t size = catalog_item(catalog, item).size;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < receivers.size(); ++i) {
      const MemberSnapshot& m = receivers[i];
      if (m.peer == source || m.hosts(item) || m.disk_free < size || m.free_slots == 0) continue;
      if (!best || m.load < receivers[*best].load ||
          (m.load == receivers[*best].load && m.peer < receivers[*best].peer)) {
        best = i;
      }
    }
    if (!best) continue;
    MemberSnapshot& m = receivers[*best];
    moves.push_back({item, source, m.peer, MoveReason::InterBalance});
    m.disk_free -= size;
    --m.free_slots;
    m.hosted.push_back(item);
  }
  return moves;
}

double update_departure_estimate(double previous, bool observed_offline, double ewma_weight) {
  return (1.0 - ewma_weight) * previous + ewma_weight * (observed_offline ? 1.0 : 0.0);
}

}  // namespace clusterrep
