#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "clusterrep/placement.hpp"
#include "clusterrep/rng.hpp"

namespace clusterrep {

struct WorkloadConfig {
  double query_rate = 300.0;       // aggregate queries per second
  double offered_load_bps = 0.0;   // > 0 overrides query_rate as bits/s of responses
  std::uint64_t payload_bytes = 1000;
  double zipf_s = 1.0;
  std::size_t catalog_size = 100;
  double duration_s = 12.0;
  double warmup_s = 2.0;
  double churn_rate = 0.0;         // leave events per second
  double rejoin_delay_s = 5.0;
  bool churn_exempt_origins = true;
  double classification_period_s = 0.0;  // 0: classify once at warm-up end

  /// query_rate, or offered_load_bps converted at payload_bytes per query.
  double effective_query_rate() const;
  /// Throws ConfigError; messages name the fields involved.
  void validate() const;
};

/// Samples ranks 0..n-1 with P(k) proportional to 1 / (k+1)^s.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double s);

  std::size_t size() const { return cdf_.size(); }
  double pmf(std::size_t k) const;
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<double> cdf_;  // normalized, last entry 1
};

/// Poisson arrivals at the configured rate; content by Zipf rank (content id
/// = rank), requester uniform over peers. Per arrival the draws are
/// inter-arrival gap, content, requester, in that order.
class QueryGenerator {
 public:
  QueryGenerator(const WorkloadConfig& cfg, std::size_t catalog_size, std::size_t n_peers,
                 std::uint64_t seed);

  QueryRecord next();

 private:
  Rng rng_;
  ZipfSampler zipf_;
  double rate_per_ms_;
  std::size_t n_peers_;
  double now_ms_ = 0.0;
};

/// All arrivals in [0, duration_s).
std::vector<QueryRecord> generate_queries(const WorkloadConfig& cfg, std::size_t catalog_size,
                                          std::size_t n_peers, std::uint64_t seed);

}  // namespace clusterrep
