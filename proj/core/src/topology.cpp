#include "clusterrep/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clusterrep/errors.hpp"
#include "clusterrep/rng.hpp"

namespace clusterrep {

namespace {

void check_range(const AttributeRange& r, const char* name, bool strictly_positive) {
  if (!std::isfinite(r.min) || !std::isfinite(r.max)) {
    throw ConfigError(std::string(name) + ": range bounds must be finite");
  }
  if (r.min > r.max) {
    throw ConfigError(std::string(name) + ": min " + std::to_string(r.min) +
                      " exceeds max " + std::to_string(r.max));
  }
  if (strictly_positive ? r.min <= 0.0 : r.min < 0.0) {
    throw ConfigError(std::string(name) + ": min must be " +
                      (strictly_positive ? "positive" : "non-negative"));
  }
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

void DelayMatrix::set(std::size_t a, std::size_t b, double ms) {
  d_[a * n_ + b] = ms;
  d_[b * n_ + a] = ms;
}

void TopologyParams::validate() const {
  if (n_peers < 2) throw ConfigError("n_peers: need at least 2 peers");
  check_range(up_bps, "up_bps", true);
  check_range(cpu, "cpu", true);
  check_range(mem, "mem", true);
  check_range(access_latency_ms, "access_latency_ms", true);
  check_range(down_delay_ms, "down_delay_ms", false);
  check_range(overlay_delay_ms, "overlay_delay_ms", false);
  check_range(disk_capacity_bytes, "disk_capacity_bytes", false);
  check_range(departure_prob, "departure_prob", false);
  if (departure_prob.max > 1.0) throw ConfigError("departure_prob: max exceeds 1");
  if (!(down_up_ratio > 0.0)) throw ConfigError("down_up_ratio: must be positive");
  if (service_queue_cap < 1) throw ConfigError("service_queue_cap: must be at least 1");
}

Topology::Topology(std::vector<PeerNode> peers, std::vector<AccessLink> access,
                   std::vector<std::size_t> router_of, DelayMatrix overlay)
    : peers_(std::move(peers)),
      access_(std::move(access)),
      router_of_(std::move(router_of)),
      overlay_(std::move(overlay)) {
  if (access_.size() != peers_.size() || router_of_.size() != peers_.size()) {
    throw ConfigError("topology: every peer needs one access link and one router");
  }
  for (std::size_t i = 0; i < peers_.size(); ++i) {
    const PeerNode& p = peers_[i];
    if (index_of(p.id) != i) throw ConfigError("topology: peer ids must be dense and ordered");
    if (!(p.access_latency > 0.0)) throw ConfigError("topology: access_latency must be positive");
    if (router_of_[i] >= overlay_.size()) throw ConfigError("topology: router index out of range");
    if (access_[i].up_delay_ms < 0.0 || access_[i].down_delay_ms < 0.0) {
      throw ConfigError("topology: negative access delay");
    }
  }
  for (std::size_t a = 0; a < overlay_.size(); ++a) {
    if (overlay_.at(a, a) != 0.0) throw ConfigError("topology: overlay diagonal must be zero");
    for (std::size_t b = a + 1; b < overlay_.size(); ++b) {
      if (overlay_.at(a, b) != overlay_.at(b, a) || overlay_.at(a, b) < 0.0) {
        throw ConfigError("topology: overlay delays must be symmetric and non-negative");
      }
    }
  }
}

const PeerNode& Topology::peer(PeerId id) const {
  if (index_of(id) >= peers_.size()) throw LookupError("unknown peer " + to_string(id));
  return peers_[index_of(id)];
}

const AccessLink& Topology::access(PeerId id) const {
  if (index_of(id) >= access_.size()) throw LookupError("unknown peer " + to_string(id));
  return access_[index_of(id)];
}

std::size_t Topology::router_of(PeerId id) const {
  if (index_of(id) >= router_of_.size()) throw LookupError("unknown peer " + to_string(id));
  return router_of_[index_of(id)];
}

Topology build_topology(const TopologyParams& params, std::uint64_t seed) {
  params.validate();
  const std::size_t n = params.n_peers;
  const std::size_t routers = params.n_routers == 0 ? n : params.n_routers;

  Rng rng(seed);
  auto draw = [&rng](const AttributeRange& r) { return rng.uniform(r.min, r.max); };

  std::vector<double> up(n), cpu(n), mem(n), lat(n), down_delay(n), disk(n), depart(n);
  for (std::size_t i = 0; i < n; ++i) {
    up[i] = draw(params.up_bps);
    cpu[i] = draw(params.cpu);
    mem[i] = draw(params.mem);
    lat[i] = draw(params.access_latency_ms);
    down_delay[i] = draw(params.down_delay_ms);
    disk[i] = draw(params.disk_capacity_bytes);
    depart[i] = draw(params.departure_prob);
  }
  DelayMatrix overlay(routers);
  for (std::size_t a = 0; a < routers; ++a) {
    for (std::size_t b = a + 1; b < routers; ++b) overlay.set(a, b, draw(params.overlay_delay_ms));
  }

  const double up_max = max_of(up), cpu_max = max_of(cpu), mem_max = max_of(mem),
               lat_max = max_of(lat);

  std::vector<PeerNode> peers(n);
  std::vector<AccessLink> access(n);
  std::vector<std::size_t> router_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    PeerNode& p = peers[i];
    p.id = peer_id(i);
    p.up_bw = up[i] / up_max;
    p.cpu = cpu[i] / cpu_max;
    p.mem = mem[i] / mem_max;
    p.access_latency = lat[i] / lat_max;
    p.raw_up_bps = up[i];
    p.raw_down_bps = up[i] * params.down_up_ratio;
    p.disk_capacity = static_cast<std::uint64_t>(std::floor(disk[i]));
    p.replica_slots = params.replica_slots;
    p.departure_prob = depart[i];
    p.service_queue_cap = params.service_queue_cap;
    access[i] = AccessLink{lat[i], down_delay[i]};
    router_of[i] = i % routers;
  }
  return Topology(std::move(peers), std::move(access), std::move(router_of), std::move(overlay));
}

double e2e_delay(const Topology& t, PeerId a, PeerId b) {
  const AccessLink& la = t.access(a);
  const AccessLink& lb = t.access(b);
  if (a == b) return 0.0;
  return la.up_delay_ms + t.overlay().at(t.router_of(a), t.router_of(b)) + lb.down_delay_ms;
}

double serialization_ms(const Topology& t, PeerId src, PeerId dst, std::uint64_t bytes) {
  const double bps = std::min(t.peer(src).raw_up_bps, t.peer(dst).raw_down_bps);
  if (!(bps > 0.0)) throw ConfigError("transfer_time: zero bandwidth on path " + to_string(src) +
                                      " -> " + to_string(dst));
  return static_cast<double>(bytes) * 8.0 / bps * 1000.0;
}

double transfer_time(const Topology& t, PeerId src, PeerId dst, std::uint64_t bytes) {
  return serialization_ms(t, src, dst, bytes) + e2e_delay(t, src, dst);
}

}  // namespace clusterrep
