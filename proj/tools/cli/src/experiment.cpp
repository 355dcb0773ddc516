#include "clusterrep_cli/experiment.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "clusterrep_cli/scenario_config.hpp"

namespace clusterrep::cli {

namespace {

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

struct Job {
  std::size_t value_index;
  std::size_t seed_index;
  bool lb;
};

}  // namespace

std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(10);
  os << v;
  return os.str();
}

ArmStats summarize(const std::vector<MetricsReport>& runs) {
  std::vector<double> d, t, l, r;
  for (const MetricsReport& m : runs) {
    d.push_back(m.mean_delay_ms);
    t.push_back(m.aggregate_throughput_bps);
    l.push_back(static_cast<double>(m.packets_lost));
    r.push_back(static_cast<double>(m.requests_total));
  }
  ArmStats s;
  std::tie(s.delay_mean, s.delay_sd) = mean_sd(d);
  std::tie(s.throughput_mean, s.throughput_sd) = mean_sd(t);
  std::tie(s.loss_mean, s.loss_sd) = mean_sd(l);
  std::tie(s.requests_mean, s.requests_sd) = mean_sd(r);
  return s;
}

ComparisonTable run_sweep(const SimulationConfig& base, const std::string& param,
                          const std::vector<double>& values, std::size_t seeds,
                          std::size_t parallel) {
  ComparisonTable table;
  table.param = param;

  std::vector<Job> jobs;
  for (std::size_t v = 0; v < values.size(); ++v) {
    for (std::size_t s = 0; s < seeds; ++s) {
      jobs.push_back({v, s, true});
      jobs.push_back({v, s, false});
    }
  }
  std::vector<std::optional<MetricsReport>> results(jobs.size());
  std::vector<std::string> errors(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& j = jobs[i];
      try {
        SimulationConfig cfg = base;
        set_param(cfg, param, values[j.value_index]);
        cfg.seed = base.seed + j.seed_index;
        cfg.lb_enabled = j.lb;
        results[i] = run_scenario(cfg);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(parallel, jobs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t v = 0, i = 0; v < values.size(); ++v) {
    ComparisonRow row;
    row.value = values[v];
    for (std::size_t s = 0; s < seeds; ++s, i += 2) {
      for (std::size_t k : {i, i + 1}) {
        if (!results[k]) {
          table.valid = false;
          table.error = "run failed at " + param + "=" + format_number(values[v]) +
                        " seed=" + std::to_string(base.seed + s) + ": " + errors[k];
          return table;
        }
      }
      row.seeds.push_back(base.seed + s);
      row.with_lb_runs.push_back(*results[i]);
      row.without_lb_runs.push_back(*results[i + 1]);
    }
    row.with_lb = summarize(row.with_lb_runs);
    row.without_lb = summarize(row.without_lb_runs);
    table.rows.push_back(std::move(row));
  }
  return table;
}

const char* const kSweepCsvHeader =
    "param,value,arm,seeds,mean_delay_ms,mean_delay_ms_sd,throughput_bps,throughput_bps_sd,"
    "packets_lost,packets_lost_sd,requests_total,requests_total_sd,seed_list";

void write_sweep_csv(const ComparisonTable& table, std::ostream& out) {
  out << kSweepCsvHeader << '\n';
  for (const ComparisonRow& row : table.rows) {
    std::string seed_list;
    for (std::uint64_t s : row.seeds) {
      if (!seed_list.empty()) seed_list += ';';
      seed_list += std::to_string(s);
    }
    for (const auto& [arm, st] : {std::pair{"WithLB", row.with_lb}, std::pair{"WithoutLB", row.without_lb}}) {
      out << table.param << ',' << format_number(row.value) << ',' << arm << ',' << row.seeds.size()
          << ',' << format_number(st.delay_mean) << ',' << format_number(st.delay_sd) << ','
          << format_number(st.throughput_mean) << ',' << format_number(st.throughput_sd) << ','
          << format_number(st.loss_mean) << ',' << format_number(st.loss_sd) << ','
          << format_number(st.requests_mean) << ',' << format_number(st.requests_sd) << ','
          << seed_list << '\n';
    }
  }
  if (!table.valid) out << "# INVALID: " << table.error << '\n';
}

std::string param_stem(const std::string& param) {
  const auto dot = param.rfind('.');
  return dot == std::string::npos ? param : param.substr(dot + 1);
}

std::vector<std::filesystem::path> write_plot_files(const ComparisonTable& table,
                                                    const std::filesystem::path& dir,
                                                    const std::string& stem) {
  struct Metric {
    const char* name;
    const char* label;
    double ArmStats::*mean;
    double ArmStats::*sd;
  };
  const Metric metrics[] = {
      {"delay", "Mean delay (ms)", &ArmStats::delay_mean, &ArmStats::delay_sd},
      {"throughput", "Aggregate throughput (bit/s)", &ArmStats::throughput_mean,
       &ArmStats::throughput_sd},
      {"loss", "Packets lost", &ArmStats::loss_mean, &ArmStats::loss_sd},
  };

  std::vector<std::filesystem::path> written;
  std::ostringstream gp;
  gp << "# gnuplot " << stem << ".gp\n"
     << "set terminal pngcairo size 800,500\n"
     << "set key top left\n"
     << "set xlabel '" << table.param << "'\n";
  for (const Metric& m : metrics) {
    const std::filesystem::path dat = dir / (stem + "_" + m.name + ".dat");
    std::ofstream out(dat);
    out << "# " << table.param << " withlb withlb_sd withoutlb withoutlb_sd\n";
    for (const ComparisonRow& row : table.rows) {
      out << format_number(row.value) << ' ' << format_number(row.with_lb.*m.mean) << ' '
          << format_number(row.with_lb.*m.sd) << ' ' << format_number(row.without_lb.*m.mean)
          << ' ' << format_number(row.without_lb.*m.sd) << '\n';
    }
    written.push_back(dat);
    gp << "set output '" << stem << "_" << m.name << ".png'\n"
       << "set ylabel '" << m.label << "'\n"
       << "plot '" << dat.filename().string() << "' using 1:2:3 with yerrorlines title 'WithLB', \\\n"
       << "     '' using 1:4:5 with yerrorlines title 'WithoutLB'\n";
  }
  const std::filesystem::path script = dir / (stem + ".gp");
  std::ofstream(script) << gp.str();
  written.push_back(script);
  return written;
}

}  // namespace clusterrep::cli
