#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "clusterrep/ids.hpp"
#include "clusterrep/topology.hpp"

namespace clusterrep {

struct NodeWeight {
  PeerId peer{};
  double value = 0.0;

  bool operator==(const NodeWeight&) const = default;
};

enum class ClusterLabel { Strong, Weak };

/// "S" or "W", as carried in announcements and the query server's table.
std::string_view label_code(ClusterLabel label);

/// Strong/weak split of the fleet. `weight_vector` is sorted by descending
/// weight with ascending peer id breaking ties; `strong` and `weak` keep
/// that order.
struct Partition {
  std::vector<PeerId> strong;
  std::vector<PeerId> weak;
  std::vector<NodeWeight> weight_vector;

  bool operator==(const Partition&) const = default;
};

struct Cluster {
  ClusterId id{};
  ClusterLabel label = ClusterLabel::Strong;
  std::vector<PeerId> members;  // weight order
  PeerId leader{};
  std::vector<ClusterId> neighbors;
};

struct ClusteringConfig {
  std::optional<double> beta_weight;  // unset: median of the fleet's weights
  std::size_t max_cluster_size = 10;

  void validate() const;
};

/// (bw + sp + mz) / al. Throws DomainError when al <= 0.
double compute_weight(double bw, double sp, double mz, double al);

/// Weights for every peer of the topology, in peer-id order.
std::vector<NodeWeight> node_weights(const Topology& t);

/// Median of the weight values (mean of the middle pair for even sizes).
double median_weight(std::span<const NodeWeight> weights);

/// Peers with weight >= beta are strong. Throws DomainError on empty input.
Partition partition_nodes(std::span<const NodeWeight> weights, double beta_weight);

/// Highest weight wins; lowest peer id breaks ties. Throws DomainError for an
/// empty cluster and LookupError when a member has no weight entry.
PeerId elect_leader(const Cluster& c, std::span<const NodeWeight> weights);

/// Chunks the strong list, then the weak list, into clusters of at most
/// max_cluster_size peers, in weight order. Strong clusters take the low ids.
/// Each cluster lists every other cluster of its label as a neighbor and has
/// its leader elected from the partition's weight vector.
std::vector<Cluster> form_clusters(const Partition& p, std::size_t max_cluster_size);

/// Peer id -> (label, cluster id). The query server's view of the clustering.
class ClusterTable {
 public:
  struct Entry {
    ClusterLabel label = ClusterLabel::Strong;
    ClusterId cluster{};
  };

  ClusterTable() = default;
  /// Throws ConfigError unless every peer in [0, n_peers) is in exactly one cluster.
  ClusterTable(std::span<const Cluster> clusters, std::size_t n_peers);

  std::size_t size() const { return entries_.size(); }
  const Entry& at(PeerId p) const;
  ClusterLabel label(PeerId p) const { return at(p).label; }
  ClusterId cluster(PeerId p) const { return at(p).cluster; }

 private:
  std::vector<Entry> entries_;
};

}  // namespace clusterrep
