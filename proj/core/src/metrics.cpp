#include "clusterrep/metrics.hpp"

namespace clusterrep {

nlohmann::json to_json(const MetricsReport& m) {
  return nlohmann::json{
      {"mean_delay_ms", m.mean_delay_ms},
      {"aggregate_throughput_bps", m.aggregate_throughput_bps},
      {"packets_lost", m.packets_lost},
      {"requests_total", m.requests_total},
      {"requests_completed", m.requests_completed},
      {"bytes_delivered", m.bytes_delivered},
      {"replication_bytes_moved", m.replication_bytes_moved},
      {"replication_moves", m.replication_moves},
      {"window_s", m.window_s},
      {"per_peer_load", m.per_peer_load},
  };
}

MetricsReport metrics_from_json(const nlohmann::json& j) {
  MetricsReport m;
  m.mean_delay_ms = j.at("mean_delay_ms").get<double>();
  m.aggregate_throughput_bps = j.at("aggregate_throughput_bps").get<double>();
  m.packets_lost = j.at("packets_lost").get<std::uint64_t>();
  m.requests_total = j.at("requests_total").get<std::uint64_t>();
  m.requests_completed = j.at("requests_completed").get<std::uint64_t>();
  m.bytes_delivered = j.at("bytes_delivered").get<std::uint64_t>();
  m.replication_bytes_moved = j.at("replication_bytes_moved").get<std::uint64_t>();
  m.replication_moves = j.at("replication_moves").get<std::uint64_t>();
  m.window_s = j.at("window_s").get<double>();
  m.per_peer_load = j.at("per_peer_load").get<std::vector<std::uint64_t>>();
  return m;
}

}  // namespace clusterrep
