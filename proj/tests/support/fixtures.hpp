#pragma once

#include <cstdint>
#include <vector>

#include "clusterrep/clustering.hpp"
#include "clusterrep/placement.hpp"
#include "clusterrep/simulation.hpp"
#include "clusterrep/topology.hpp"

namespace clusterrep::testing {

// Hand-built peer. Normalized attributes are weight/3 each with latency 1, so
// compute_weight returns `weight` (keep it in (0, 3]).
struct PeerSpec {
  double weight = 3.0;
  std::uint64_t disk = 100000;
  double up_ms = 1.0;
  double down_ms = 1.0;
  double up_bps = 1e6;
  double down_bps = 1e6;
  std::uint32_t slots = 8;
  std::uint32_t queue_cap = 30;
  double depart = 0.0;
};

inline Topology make_topology(const std::vector<PeerSpec>& specs, DelayMatrix overlay) {
  std::vector<PeerNode> peers;
  std::vector<AccessLink> access;
  std::vector<std::size_t> router_of;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const PeerSpec& s = specs[i];
    PeerNode p;
    p.id = peer_id(i);
    p.up_bw = p.cpu = p.mem = s.weight / 3.0;
    p.access_latency = 1.0;
    p.raw_up_bps = s.up_bps;
    p.raw_down_bps = s.down_bps;
    p.disk_capacity = s.disk;
    p.replica_slots = s.slots;
    p.departure_prob = s.depart;
    p.service_queue_cap = s.queue_cap;
    peers.push_back(p);
    access.push_back({s.up_ms, s.down_ms});
    router_of.push_back(i);
  }
  return Topology(std::move(peers), std::move(access), std::move(router_of), std::move(overlay));
}

inline Topology make_topology(const std::vector<PeerSpec>& specs, double overlay_ms = 0.0) {
  DelayMatrix overlay(specs.size());
  for (std::size_t a = 0; a < specs.size(); ++a) {
    for (std::size_t b = a + 1; b < specs.size(); ++b) overlay.set(a, b, overlay_ms);
  }
  return make_topology(specs, std::move(overlay));
}

inline ContentItem item(std::uint32_t id, std::uint32_t origin, std::uint64_t size) {
  return ContentItem{content_id(id), peer_id(origin), size, ContentClass::Unclassified, 0};
}

inline Cluster cluster(std::uint32_t id, ClusterLabel label, std::vector<std::uint32_t> members) {
  Cluster c;
  c.id = cluster_id(id);
  c.label = label;
  for (std::uint32_t m : members) c.members.push_back(peer_id(m));
  c.leader = c.members.front();
  return c;
}

// Small scenario config for kernel tests; the arrival rate is effectively zero
// so only hand-scheduled queries happen.
inline SimulationConfig quiet_config(std::size_t n_peers, std::size_t catalog) {
  SimulationConfig cfg;
  cfg.topology.n_peers = n_peers;
  cfg.workload.catalog_size = catalog;
  cfg.workload.query_rate = 1e-12;
  cfg.workload.duration_s = 10.0;
  cfg.workload.warmup_s = 1.0;
  cfg.workload.payload_bytes = 1000;
  return cfg;
}

}  // namespace clusterrep::testing
