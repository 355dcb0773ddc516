#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "clusterrep/metrics.hpp"
#include "clusterrep/simulation.hpp"

namespace clusterrep::cli {

/// Seed mean and sample standard deviation (n - 1) of one arm.
struct ArmStats {
  double delay_mean = 0, delay_sd = 0;
  double throughput_mean = 0, throughput_sd = 0;
  double loss_mean = 0, loss_sd = 0;
  double requests_mean = 0, requests_sd = 0;
};

ArmStats summarize(const std::vector<MetricsReport>& runs);

struct ComparisonRow {
  double value = 0.0;
  std::vector<std::uint64_t> seeds;  // shared by both arms
  ArmStats with_lb;
  ArmStats without_lb;
  std::vector<MetricsReport> with_lb_runs;
  std::vector<MetricsReport> without_lb_runs;
};

struct ComparisonTable {
  std::string param;
  std::vector<ComparisonRow> rows;
  bool valid = true;
  std::string error;  // set when a run failed and the table is partial
};

/// Seeds run are base.seed, base.seed + 1, ..., one WithLB and one WithoutLB
/// run per (value, seed). Jobs run on up to `parallel` threads; rows come
/// back ordered by sweep value. A failing run stops the table at the last
/// complete row and marks it invalid.
ComparisonTable run_sweep(const SimulationConfig& base, const std::string& param,
                          const std::vector<double>& values, std::size_t seeds,
                          std::size_t parallel = 1);

/// The CSV schema, one row per (value, arm).
extern const char* const kSweepCsvHeader;
void write_sweep_csv(const ComparisonTable& table, std::ostream& out);

/// Writes <stem>_delay.dat, <stem>_throughput.dat, <stem>_loss.dat and a
/// gnuplot script <stem>.gp into dir. Returns the files written.
std::vector<std::filesystem::path> write_plot_files(const ComparisonTable& table,
                                                    const std::filesystem::path& dir,
                                                    const std::string& stem);

/// "workload.payload_bytes" -> "payload_bytes".
std::string param_stem(const std::string& param);

/// Fixed, locale-independent formatting used by every table writer.
std::string format_number(double v);

}  // namespace clusterrep::cli
