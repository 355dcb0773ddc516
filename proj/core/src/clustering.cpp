#include "clusterrep/clustering.hpp"

#include <algorithm>
#include <string>

#include "clusterrep/errors.hpp"

namespace clusterrep {

namespace {

bool heavier_first(const NodeWeight& a, const NodeWeight& b) {
  if (a.value != b.value) return a.value > b.value;
  return a.peer < b.peer;
}

}  // namespace

std::string_view label_code(ClusterLabel label) {
  return label == ClusterLabel::Strong ? "S" : "W";
}

void ClusteringConfig::validate() const {
  if (beta_weight && !(*beta_weight > 0.0)) throw ConfigError("beta_weight: must be positive");
  if (max_cluster_size < 1) throw ConfigError("max_cluster_size: must be at least 1");
}

double compute_weight(double bw, double sp, double mz, double al) {
  if (!(al > 0.0)) throw DomainError("compute_weight: access latency must be positive");
  return (bw + sp + mz) / al;
}

std::vector<NodeWeight> node_weights(const Topology& t) {
  std::vector<NodeWeight> out;
  out.reserve(t.size());
  for (const PeerNode& p : t.peers()) {
    out.push_back({p.id, compute_weight(p.up_bw, p.cpu, p.mem, p.access_latency)});
  }
  return out;
}

double median_weight(std::span<const NodeWeight> weights) {
  if (weights.empty()) throw DomainError("median_weight: no weights");
  std::vector<double> v;
  v.reserve(weights.size());
  for (const NodeWeight& w : weights) v.push_back(w.value);
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Partition partition_nodes(std::span<const NodeWeight> weights, double beta_weight) {
  if (weights.empty()) throw DomainError("partition_nodes: no weights");
  Partition p;
  p.weight_vector.assign(weights.begin(), weights.end());
  std::sort(p.weight_vector.begin(), p.weight_vector.end(), heavier_first);
  for (const NodeWeight& w : p.weight_vector) {
    (w.value >= beta_weight ? p.strong : p.weak).push_back(w.peer);
  }
  return p;
}

PeerId elect_leader(const Cluster& c, std::span<const NodeWeight> weights) {
  if (c.members.empty()) throw DomainError("elect_leader: empty cluster " + to_string(c.id));
  std::optional<NodeWeight> best;
  for (PeerId m : c.members) {
    auto it = std::find_if(weights.begin(), weights.end(),
                           [m](const NodeWeight& w) { return w.peer == m; });
    if (it == weights.end()) throw LookupError("elect_leader: no weight for " + to_string(m));
    if (!best || heavier_first(*it, *best)) best = *it;
  }
  return best->peer;
}

std::vector<Cluster> form_clusters(const Partition& p, std::size_t max_cluster_size) {
  if (max_cluster_size < 1) throw DomainError("form_clusters: max_cluster_size must be >= 1");
  std::vector<Cluster> clusters;

  auto chunk = [&](const std::vector<PeerId>& peers, ClusterLabel label) {
    const std::size_t first = clusters.size();
    for (std::size_t at = 0; at < peers.size(); at += max_cluster_size) {
      Cluster c;
      c.id = cluster_id(clusters.size());
      c.label = label;
      const std::size_t end = std::min(peers.size(), at + max_cluster_size);
      c.members.assign(peers.begin() + static_cast<std::ptrdiff_t>(at),
                       peers.begin() + static_cast<std::ptrdiff_t>(end));
      c.leader = elect_leader(c, p.weight_vector);
      clusters.push_back(std::move(c));
    }
    for (std::size_t i = first; i < clusters.size(); ++i) {
      for (std::size_t j = first; j < clusters.size(); ++j) {
        if (i != j) clusters[i].neighbors.push_back(clusters[j].id);
      }
    }
  };
  chunk(p.strong, ClusterLabel::Strong);
  chunk(p.weak, ClusterLabel::Weak);
  return clusters;
}

ClusterTable::ClusterTable(std::span<const Cluster> clusters, std::size_t n_peers)
    : entries_(n_peers) {
  std::vector<bool> seen(n_peers, false);
  for (const Cluster& c : clusters) {
    for (PeerId m : c.members) {
      if (index_of(m) >= n_peers) throw ConfigError("cluster member " + to_string(m) + " unknown");
      if (seen[index_of(m)]) throw ConfigError(to_string(m) + " is in more than one cluster");
      entries_[index_of(m)] = {c.label, c.id};
      seen[index_of(m)] = true;
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ConfigError("clusters do not cover every peer");
  }
}

const ClusterTable::Entry& ClusterTable::at(PeerId p) const {
  if (index_of(p) >= entries_.size()) throw LookupError("unknown peer " + to_string(p));
  return entries_[index_of(p)];
}

}  // namespace clusterrep
