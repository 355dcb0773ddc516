#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "clusterrep/ids.hpp"

namespace clusterrep {

/// A peer's static resource profile. The normalized attributes are divided by
/// the fleet maximum so every one of them lies in (0, 1].
struct PeerNode {
  PeerId id{};
  double up_bw = 1.0;           // normalized upload bandwidth
  double cpu = 1.0;             // normalized CPU speed
  double mem = 1.0;             // normalized memory size
  double access_latency = 1.0;  // normalized access latency, > 0
  double raw_up_bps = 0.0;
  double raw_down_bps = 0.0;
  std::uint64_t disk_capacity = 0;  // bytes
  std::uint32_t replica_slots = 0;  // replicas from other origins
  double departure_prob = 0.0;      // per observation period
  std::uint32_t service_queue_cap = 1;

  bool operator==(const PeerNode&) const = default;
};

/// One-way delays of a peer's asymmetric access link, in milliseconds.
struct AccessLink {
  double up_delay_ms = 0.0;
  double down_delay_ms = 0.0;

  bool operator==(const AccessLink&) const = default;
};

/// Symmetric router-to-router delay matrix with a zero diagonal.
class DelayMatrix {
 public:
  DelayMatrix() = default;
  explicit DelayMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double at(std::size_t a, std::size_t b) const { return d_[a * n_ + b]; }
  /// Sets both (a,b) and (b,a).
  void set(std::size_t a, std::size_t b, double ms);

  bool operator==(const DelayMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

struct AttributeRange {
  double min = 1.0;
  double max = 1.0;
};

struct TopologyParams {
  std::size_t n_peers = 100;
  std::size_t n_routers = 0;  // 0: one access router per peer
  AttributeRange up_bps{256e3, 2e6};
  AttributeRange cpu{0.5, 3.0};
  AttributeRange mem{0.5, 8.0};
  AttributeRange access_latency_ms{2.0, 20.0};  // doubles as the access up-delay
  AttributeRange down_delay_ms{2.0, 20.0};
  AttributeRange overlay_delay_ms{5.0, 40.0};
  AttributeRange disk_capacity_bytes{40e3, 200e3};
  AttributeRange departure_prob{0.0, 0.2};
  double down_up_ratio = 4.0;
  std::uint32_t replica_slots = 8;
  std::uint32_t service_queue_cap = 30;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Peers, their access links, and the overlay among access routers.
/// Immutable after construction.
class Topology {
 public:
  /// Validates the structural invariants and throws ConfigError on violation.
  Topology(std::vector<PeerNode> peers, std::vector<AccessLink> access,
           std::vector<std::size_t> router_of, DelayMatrix overlay);

  std::size_t size() const { return peers_.size(); }
  std::span<const PeerNode> peers() const { return peers_; }
  const PeerNode& peer(PeerId id) const;
  const AccessLink& access(PeerId id) const;
  std::size_t router_of(PeerId id) const;
  const DelayMatrix& overlay() const { return overlay_; }

  bool operator==(const Topology&) const = default;

 private:
  std::vector<PeerNode> peers_;
  std::vector<AccessLink> access_;
  std::vector<std::size_t> router_of_;
  DelayMatrix overlay_;
};

// Draw order, per peer in id order: up_bps, cpu, mem, access latency,
// down delay, disk capacity, departure probability. Then the upper triangle
// of the router delay matrix, row-major. Peer i attaches to router
// i % n_routers. Every draw is lo + u * (hi - lo) with u = Rng::uniform01().
Topology build_topology(const TopologyParams& params, std::uint64_t seed);

/// Access up-delay of a, overlay delay between routers, access down-delay of b.
/// Zero when a == b.
double e2e_delay(const Topology& t, PeerId a, PeerId b);

/// Serialization over min(src up, dst down) plus e2e_delay, in milliseconds.
double transfer_time(const Topology& t, PeerId src, PeerId dst, std::uint64_t bytes);

/// Serialization component of transfer_time alone.
double serialization_ms(const Topology& t, PeerId src, PeerId dst, std::uint64_t bytes);

}  // namespace clusterrep
