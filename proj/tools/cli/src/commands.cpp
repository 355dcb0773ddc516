#include "clusterrep_cli/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "clusterrep/errors.hpp"
#include "clusterrep/simulation.hpp"
#include "clusterrep_cli/experiment.hpp"
#include "clusterrep_cli/scenario_config.hpp"

namespace clusterrep::cli {

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool with_lb = false;
  bool without_lb = false;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config,-c", f.config, "Scenario config (YAML)");
  cmd->add_option("--seed", f.seed, "Override the config seed");
  cmd->add_option("--set", f.sets, "Override a field: key=value (repeatable)");
}

void add_arm_flags(CLI::App* cmd, CommonFlags& f) {
  auto* on = cmd->add_flag("--with-lb", f.with_lb, "Enable load balancing");
  auto* off = cmd->add_flag("--without-lb", f.without_lb, "Placement only, no balancing");
  on->excludes(off);
}

/// flags > file > defaults
ScenarioConfig resolve(const CommonFlags& f) {
  ScenarioConfig cfg = f.config.empty() ? ScenarioConfig{} : load_config(f.config);
  for (const std::string& s : f.sets) apply_override(cfg, s);
  if (f.seed) cfg.sim.seed = *f.seed;
  if (f.with_lb) cfg.sim.lb_enabled = true;
  if (f.without_lb) cfg.sim.lb_enabled = false;
  cfg.validate();
  return cfg;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigFileError("--values: '" + tok + "' is not a number");
    }
  }
  return out;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string metrics_csv(const MetricsReport& m) {
  std::ostringstream os;
  os << "mean_delay_ms,aggregate_throughput_bps,packets_lost,requests_total,requests_completed,"
        "replication_bytes_moved\n"
     << format_number(m.mean_delay_ms) << ',' << format_number(m.aggregate_throughput_bps) << ','
     << m.packets_lost << ',' << m.requests_total << ',' << m.requests_completed << ','
     << m.replication_bytes_moved << '\n';
  return os.str();
}

int cmd_run(const CommonFlags& f, const std::string& out_path, const std::string& format,
            const std::string& audit_path, std::optional<int> audit_level,
            const std::string& load_csv, std::ostream& out) {
  const ScenarioConfig cfg = resolve(f);
  std::ofstream audit_file;
  AuditLog audit;
  if (!audit_path.empty()) {
    audit_file.open(audit_path);
    if (!audit_file) throw std::runtime_error("cannot write " + audit_path);
    audit = AuditLog(&audit_file, audit_level.value_or(std::max(cfg.audit_level, 1)));
  }
  const World world = build_world(cfg.sim);
  Simulation sim(world, cfg.sim, audit);
  sim.enable_load_trace(!load_csv.empty());
  const MetricsReport m = sim.run();

  if (format == "csv") {
    emit(metrics_csv(m), out_path, out);
  } else {
    nlohmann::json j = to_json(m);
    j["lb_enabled"] = cfg.sim.lb_enabled;
    j["seed"] = cfg.sim.seed;
    emit(j.dump(2) + "\n", out_path, out);
  }
  if (!load_csv.empty()) {
    std::ostringstream os;
    os << "tick_ms,peer,load_bytes\n";
    for (const LoadSample& s : sim.load_trace()) {
      os << format_number(s.tick_ms) << ',' << index_of(s.peer) << ',' << s.load << '\n';
    }
    emit(os.str(), load_csv, out);
  }
  return 0;
}

int cmd_sweep(const CommonFlags& f, std::string param, const std::string& values_flag,
              std::optional<std::size_t> seeds_flag, std::string out_dir, std::size_t parallel,
              std::ostream& out, std::ostream& err) {
  const ScenarioConfig cfg = resolve(f);
  std::vector<double> values;
  std::size_t seeds = 5;
  if (cfg.sweep) {
    param = param.empty() ? cfg.sweep->param : param;
    values = cfg.sweep->values;
    seeds = cfg.sweep->seeds;
  }
  if (!values_flag.empty()) values = parse_values(values_flag);
  if (seeds_flag) seeds = *seeds_flag;
  if (param.empty()) throw ConfigFileError("sweep: no parameter given (--param or sweep.param)");
  if (!is_sweepable(param)) throw ConfigFileError("sweep: '" + param + "' is not a numeric field");
  if (values.empty()) throw ConfigFileError("sweep: empty value list");
  if (seeds < 1) throw ConfigFileError("sweep: --seeds must be at least 1");
  for (double v : values) {
    ScenarioConfig probe = cfg;
    set_param(probe.sim, param, v);
    probe.validate();
  }

  if (out_dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    out_dir = env != nullptr && *env != '\0' ? env : ".";
  }
  std::filesystem::create_directories(out_dir);

  const ComparisonTable table = run_sweep(cfg.sim, param, values, seeds, parallel);
  const std::string stem = param_stem(param);
  const std::filesystem::path csv = std::filesystem::path(out_dir) / ("sweep_" + stem + ".csv");
  {
    std::ofstream f(csv);
    if (!f) throw std::runtime_error("cannot write " + csv.string());
    write_sweep_csv(table, f);
  }
  if (!table.valid) {
    err << "error: " << table.error << " (partial table in " << csv.string() << ")\n";
    return 1;
  }
  write_plot_files(table, out_dir, stem);
  out << csv.string() << '\n';
  return 0;
}

int cmd_dump(const CommonFlags& f, const std::string& out_path, std::ostream& out) {
  const ScenarioConfig cfg = resolve(f);
  const World world = build_world(cfg.sim);
  Simulation sim(world, cfg.sim);
  sim.run_until(cfg.sim.workload.warmup_s * 1000.0 + cfg.sim.control_delay_ms);
  emit(dump_state(sim).dump(2) + "\n", out_path, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cluster-based replica placement and load balancing simulator", "clusterrep"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, dump_flags, validate_flags;
  std::string run_out, run_format = "json", audit_path, load_csv;
  std::optional<int> audit_level;
  auto* run = app.add_subcommand("run", "Run one scenario and print its metrics");
  add_common(run, run_flags);
  add_arm_flags(run, run_flags);
  run->add_option("--out,-o", run_out, "Write the report here instead of stdout");
  run->add_option("--format", run_format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--audit", audit_path, "Write the JSON-lines audit log here");
  run->add_option("--audit-level", audit_level, "1: decisions, 2: every event");
  run->add_option("--load-csv", load_csv, "Write per-tick peer loads as CSV");

  std::string param, values, sweep_out;
  std::optional<std::size_t> seeds;
  std::size_t parallel = 1;
  auto* sweep = app.add_subcommand("sweep", "Compare WithLB and WithoutLB over a parameter sweep");
  add_common(sweep, sweep_flags);
  sweep->add_option("--param", param, "Dotted field name, e.g. workload.payload_bytes");
  sweep->add_option("--values", values, "Comma-separated values");
  sweep->add_option("--seeds", seeds, "Seeds per point (default 5)");
  sweep->add_option("--out,-o", sweep_out, std::string("Output directory (default $") + kOutDirEnv + " or .)");
  sweep->add_option("--parallel,-j", parallel, "Worker threads")->check(CLI::PositiveNumber);
  std::string sweep_format = "csv";
  sweep->add_option("--format", sweep_format, "Table format")->check(CLI::IsMember({"csv"}));

  std::string dump_out;
  auto* dump = app.add_subcommand("dump-state", "Write the state after warm-up placement as JSON");
  add_common(dump, dump_flags);
  dump->add_option("--out,-o", dump_out, "Write here instead of stdout");

  auto* validate = app.add_subcommand("validate", "Check a config file and exit");
  add_common(validate, validate_flags);
  add_arm_flags(validate, validate_flags);

  std::vector<std::string> argv_store{"clusterrep"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*run) return cmd_run(run_flags, run_out, run_format, audit_path, audit_level, load_csv, out);
    if (*sweep) return cmd_sweep(sweep_flags, param, values, seeds, sweep_out, parallel, out, err);
    if (*dump) return cmd_dump(dump_flags, dump_out, out);
    if (*validate) {
      resolve(validate_flags);
      out << "ok\n";
      return 0;
    }
  } catch (const ConfigFileError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace clusterrep::cli
