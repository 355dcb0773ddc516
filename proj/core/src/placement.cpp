#include "clusterrep/placement.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "clusterrep/errors.hpp"

namespace clusterrep {

std::string_view class_name(ContentClass c) {
  switch (c) {
    case ContentClass::Class1: return "Class1";
    case ContentClass::Class2: return "Class2";
    case ContentClass::Unclassified: break;
  }
  return "Unclassified";
}

const ContentItem& catalog_item(std::span<const ContentItem> catalog, ContentId id) {
  if (index_of(id) >= catalog.size()) throw LookupError("unknown content " + to_string(id));
  return catalog[index_of(id)];
}

// ---------------------------------------------------------------------------
// Query server

QueryServer::QueryServer(Catalog catalog, ClusterTable cluster_table)
    : catalog_(std::move(catalog)), table_(std::move(cluster_table)) {
  for (std::size_t i = 0; i < catalog_.size(); ++i) {
    if (index_of(catalog_[i].id) != i) throw ConfigError("catalog ids must be dense and ordered");
  }
}

void QueryServer::register_query(const QueryRecord& q) {
  if (index_of(q.ckwd) >= catalog_.size()) {
    throw QueryMissError("query for unknown content " + to_string(q.ckwd));
  }
  log_.push_back(q);
  ++catalog_[index_of(q.ckwd)].access_count_window;
}

std::uint64_t QueryServer::window_count(ContentId id) const {
  return catalog_item(catalog_, id).access_count_window;
}

void QueryServer::apply_classes(const ClassMap& classes) {
  for (const auto& [id, cls] : classes) catalog_[index_of(id)].class_label = cls;
}

void QueryServer::reset_window() {
  log_.clear();
  for (ContentItem& c : catalog_) c.access_count_window = 0;
}

ClassMap classify_content(const QueryServer& qs, std::uint64_t a_min) {
  ClassMap out;
  for (const ContentItem& c : qs.catalog()) {
    out[c.id] = c.access_count_window >= a_min ? ContentClass::Class1 : ContentClass::Class2;
  }
  return out;
}

void PlacementConfig::validate() const {
  if (a_min < 1) throw ConfigError("a_min: must be at least 1");
  if (copies_class1 < copies_class2) {
    throw ConfigError("copies_class1: must be >= copies_class2");
  }
}

// ---------------------------------------------------------------------------
// Replica bookkeeping

const HostedCopy* PeerStore::find(ContentId id) const {
  auto it = std::find_if(copies.begin(), copies.end(),
                         [id](const HostedCopy& c) { return c.item == id; });
  return it == copies.end() ? nullptr : &*it;
}

HostedCopy* PeerStore::find(ContentId id) {
  return const_cast<HostedCopy*>(std::as_const(*this).find(id));
}

std::size_t PeerStore::replica_count() const {
  return static_cast<std::size_t>(
      std::count_if(copies.begin(), copies.end(), [](const HostedCopy& c) { return !c.origin; }));
}

bool PeerStore::can_accept(std::uint64_t bytes) const {
  return online && disk_free >= bytes && replica_count() < replica_slots;
}

ReplicaMap::ReplicaMap(const Topology& t, std::span<const ContentItem> catalog)
    : holders_(catalog.size()) {
  stores_.reserve(t.size());
  for (const PeerNode& p : t.peers()) {
    PeerStore s;
    s.peer = p.id;
    s.disk_capacity = p.disk_capacity;
    s.disk_free = p.disk_capacity;
    s.replica_slots = p.replica_slots;
    stores_.push_back(std::move(s));
  }
  for (const ContentItem& c : catalog) {
    if (c.size == 0) throw ConfigError("content " + to_string(c.id) + " has zero size");
    PeerStore& s = store(c.origin);
    if (s.disk_free < c.size) {
      throw ConfigError(to_string(c.origin) + " cannot fit its origin item " + to_string(c.id));
    }
    s.disk_free -= c.size;
    s.copies.insert(s.copies.begin(), HostedCopy{c.id, true, 0.0, 0, 0.0});
    add_holder(c.id, c.origin);
  }
}

const PeerStore& ReplicaMap::store(PeerId p) const {
  if (index_of(p) >= stores_.size()) throw LookupError("unknown peer " + to_string(p));
  return stores_[index_of(p)];
}

PeerStore& ReplicaMap::store(PeerId p) {
  return const_cast<PeerStore&>(std::as_const(*this).store(p));
}

std::span<const PeerId> ReplicaMap::holders(ContentId item) const {
  if (index_of(item) >= holders_.size()) throw LookupError("unknown content " + to_string(item));
  return holders_[index_of(item)];
}

void ReplicaMap::add_holder(ContentId item, PeerId p) {
  auto& h = holders_[index_of(item)];
  h.insert(std::lower_bound(h.begin(), h.end(), p), p);
}

void ReplicaMap::remove_holder(ContentId item, PeerId p) {
  auto& h = holders_[index_of(item)];
  auto it = std::lower_bound(h.begin(), h.end(), p);
  if (it != h.end() && *it == p) h.erase(it);
}

bool ReplicaMap::add_replica(PeerId p, const ContentItem& item, double host_weight,
                             double available_at_ms) {
  PeerStore& s = store(p);
  if (s.hosts(item.id) || !s.can_accept(item.size)) return false;
  s.disk_free -= item.size;
  s.copies.push_back(HostedCopy{item.id, false, host_weight, 0, available_at_ms});
  add_holder(item.id, p);
  return true;
}

bool ReplicaMap::remove_replica(PeerId p, const ContentItem& item) {
  PeerStore& s = store(p);
  auto it = std::find_if(s.copies.begin(), s.copies.end(),
                         [&](const HostedCopy& c) { return c.item == item.id && !c.origin; });
  if (it == s.copies.end()) return false;
  s.copies.erase(it);
  s.disk_free += item.size;
  remove_holder(item.id, p);
  return true;
}

std::vector<ContentId> ReplicaMap::take_offline(PeerId p, std::span<const ContentItem> catalog) {
  std::vector<ContentId> dropped;
  for (const HostedCopy& c : store(p).copies) {
    if (!c.origin) dropped.push_back(c.item);
  }
  for (ContentId id : dropped) remove_replica(p, catalog_item(catalog, id));
  store(p).online = false;
  return dropped;
}

void ReplicaMap::bring_online(PeerId p) { store(p).online = true; }

// ---------------------------------------------------------------------------
// Planning and execution

PlacementPlan plan_placement(const ClassMap& classes, std::span<const Cluster> clusters,
                             std::span<const NodeWeight> weights, const ReplicaMap& replicas,
                             std::span<const ContentItem> catalog, const PlacementConfig& cfg) {
  PlacementPlan plan;
  plan.class_map = classes;

  // Candidate peers per label, descending weight with ascending id on ties.
  std::vector<NodeWeight> sorted(weights.begin(), weights.end());
  std::sort(sorted.begin(), sorted.end(), [](const NodeWeight& a, const NodeWeight& b) {
    return a.value != b.value ? a.value > b.value : a.peer < b.peer;
  });
  const ClusterTable table(clusters, replicas.size());
  std::vector<PeerId> strong, weak;
  for (const NodeWeight& w : sorted) {
    (table.label(w.peer) == ClusterLabel::Strong ? strong : weak).push_back(w.peer);
  }

  // Reservation state so that later items see capacity taken by earlier ones.
  std::vector<std::uint64_t> disk_free(replicas.size());
  std::vector<std::size_t> free_slots(replicas.size());
  for (const PeerStore& s : replicas.stores()) {
    disk_free[index_of(s.peer)] = s.disk_free;
    const std::size_t used = s.replica_count();
    free_slots[index_of(s.peer)] = s.replica_slots > used ? s.replica_slots - used : 0;
  }

  for (const auto& [id, cls] : classes) {
    const ContentItem& item = catalog_item(catalog, id);
    const bool hot = cls == ContentClass::Class1;
    if (cls == ContentClass::Unclassified) continue;
    const std::size_t wanted = hot ? cfg.copies_class1 : cfg.copies_class2;
    if (wanted == 0) continue;

    std::vector<PeerId> targets;
    for (PeerId p : hot ? strong : weak) {
      if (targets.size() == wanted) break;
      const PeerStore& s = replicas.store(p);
      const std::size_t i = index_of(p);
      if (p == item.origin || !s.online || s.hosts(id)) continue;
      if (disk_free[i] < item.size || free_slots[i] == 0) continue;
      disk_free[i] -= item.size;
      --free_slots[i];
      targets.push_back(p);
    }
    if (targets.size() < wanted) plan.shortfalls.push_back({id, wanted, targets.size()});
    if (targets.empty()) {
      plan.failures.push_back(id);
    } else {
      plan.assignments[id] = std::move(targets);
    }
  }
  return plan;
}

ReplicationAnnouncement announce(const ReplicaMap& replicas, const ClusterTable& table, PeerId p) {
  ReplicationAnnouncement a;
  a.nid = p;
  a.clid = table.label(p);
  for (const HostedCopy& c : replicas.store(p).copies) a.contents.push_back(c.item);
  return a;
}

PlacementResult execute_placement(ReplicaMap& replicas, const PlacementPlan& plan,
                                  std::span<const ContentItem> catalog,
                                  std::span<const NodeWeight> weights, const ClusterTable& table,
                                  const Topology& topology, double now_ms) {
  PlacementResult result;
  std::vector<PeerId> touched;
  for (const auto& [id, targets] : plan.assignments) {
    const ContentItem& item = catalog_item(catalog, id);
    for (PeerId target : targets) {
      double weight = 0.0;
      for (const NodeWeight& w : weights) {
        if (w.peer == target) weight = w.value;
      }
      const double ready = now_ms + transfer_time(topology, item.origin, target, item.size);
      if (!replicas.add_replica(target, item, weight, ready)) {
        result.skipped.emplace_back(id, target);
        continue;
      }
      result.transfers.push_back({id, item.origin, target, item.size, ready});
      touched.push_back(target);
    }
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (PeerId p : touched) result.announcements.push_back(announce(replicas, table, p));
  return result;
}

PeerId route_query(const QueryRecord& q, const ClusterTable& table, const ReplicaMap& replicas,
                   std::span<const ContentItem> catalog, const Topology& topology, double now_ms) {
  const ContentItem& item = catalog_item(catalog, q.ckwd);

  auto usable = [&](PeerId p) {
    const PeerStore& s = replicas.store(p);
    const HostedCopy* c = s.find(q.ckwd);
    return s.online && c != nullptr && c->available_at_ms <= now_ms;
  };
  auto nearest = [&](ClusterLabel tier) -> std::optional<PeerId> {
    std::optional<PeerId> best;
    double best_delay = std::numeric_limits<double>::infinity();
    for (PeerId p : replicas.holders(q.ckwd)) {  // ascending id, so ties keep the lowest
      if (table.label(p) != tier || !usable(p)) continue;
      const double d = e2e_delay(topology, p, q.nid);
      if (d < best_delay) {
        best_delay = d;
        best = p;
      }
    }
    return best;
  };

  if (auto p = nearest(ClusterLabel::Strong)) return *p;
  if (auto p = nearest(ClusterLabel::Weak)) return *p;
  if (usable(item.origin)) return item.origin;
  throw RoutingError("no live holder for " + to_string(q.ckwd));
}

}  // namespace clusterrep
