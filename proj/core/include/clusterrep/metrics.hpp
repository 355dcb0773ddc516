#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace clusterrep {

/// Results over the measurement window (warm-up excluded). A request counts
/// toward the window when it arrives inside it.
struct MetricsReport {
  double mean_delay_ms = 0.0;
  double aggregate_throughput_bps = 0.0;
  std::uint64_t packets_lost = 0;
  std::uint64_t requests_total = 0;
  std::uint64_t requests_completed = 0;
  std::uint64_t bytes_delivered = 0;
  std::uint64_t replication_bytes_moved = 0;
  std::uint64_t replication_moves = 0;
  double window_s = 0.0;
  std::vector<std::uint64_t> per_peer_load;  // bytes served per peer in the window

  bool operator==(const MetricsReport&) const = default;
};

nlohmann::json to_json(const MetricsReport& m);
MetricsReport metrics_from_json(const nlohmann::json& j);

}  // namespace clusterrep
