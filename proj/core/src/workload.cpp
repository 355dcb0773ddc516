#include "clusterrep/workload.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clusterrep/errors.hpp"

namespace clusterrep {

double WorkloadConfig::effective_query_rate() const {
  if (offered_load_bps > 0.0) return offered_load_bps / (static_cast<double>(payload_bytes) * 8.0);
  return query_rate;
}

void WorkloadConfig::validate() const {
  if (payload_bytes < 1) throw ConfigError("payload_bytes: must be at least 1");
  if (!(effective_query_rate() > 0.0)) throw ConfigError("query_rate: must be positive");
  if (offered_load_bps < 0.0) throw ConfigError("offered_load_bps: must be non-negative");
  if (!(zipf_s >= 0.0)) throw ConfigError("zipf_s: must be non-negative");
  if (catalog_size < 1) throw ConfigError("catalog_size: must be at least 1");
  if (!(warmup_s >= 0.0)) throw ConfigError("warmup_s: must be non-negative");
  if (!(duration_s > warmup_s)) {
    throw ConfigError("duration_s (" + std::to_string(duration_s) +
                      ") must exceed warmup_s (" + std::to_string(warmup_s) + ")");
  }
  if (!(churn_rate >= 0.0)) throw ConfigError("churn_rate: must be non-negative");
  if (!(rejoin_delay_s > 0.0)) throw ConfigError("rejoin_delay_s: must be positive");
  if (!(classification_period_s >= 0.0)) {
    throw ConfigError("classification_period_s: must be non-negative");
  }
}

ZipfSampler::ZipfSampler(std::size_t n, double s) : cdf_(n) {
  if (n == 0) throw DomainError("ZipfSampler: empty support");
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    total += std::pow(static_cast<double>(k + 1), -s);
    cdf_[k] = total;
  }
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

double ZipfSampler::pmf(std::size_t k) const {
  return k == 0 ? cdf_[0] : cdf_[k] - cdf_[k - 1];
}

std::size_t ZipfSampler::sample(Rng& rng) const {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

QueryGenerator::QueryGenerator(const WorkloadConfig& cfg, std::size_t catalog_size,
                               std::size_t n_peers, std::uint64_t seed)
    : rng_(seed),
      zipf_(catalog_size, cfg.zipf_s),
      rate_per_ms_(cfg.effective_query_rate() / 1000.0),
      n_peers_(n_peers) {
  if (n_peers == 0) throw DomainError("QueryGenerator: no peers");
}

QueryRecord QueryGenerator::next() {
  now_ms_ += rng_.exponential(rate_per_ms_);
  QueryRecord q;
  q.time_ms = now_ms_;
  q.ckwd = content_id(zipf_.sample(rng_));
  q.nid = peer_id(rng_.uniform_index(n_peers_));
  return q;
}

std::vector<QueryRecord> generate_queries(const WorkloadConfig& cfg, std::size_t catalog_size,
                                          std::size_t n_peers, std::uint64_t seed) {
  cfg.validate();
  QueryGenerator gen(cfg, catalog_size, n_peers, seed);
  std::vector<QueryRecord> out;
  const double end_ms = cfg.duration_s * 1000.0;
  for (QueryRecord q = gen.next(); q.time_ms < end_ms; q = gen.next()) out.push_back(q);
  return out;
}

}  // namespace clusterrep
