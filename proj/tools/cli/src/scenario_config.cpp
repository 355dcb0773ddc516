#include "clusterrep_cli/scenario_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "clusterrep/errors.hpp"

namespace clusterrep::cli {

namespace {

using Setter = std::function<void(SimulationConfig&, double)>;
using Getter = std::function<double(const SimulationConfig&)>;

std::uint64_t as_count(double v, const std::string& name) {
  if (!(v >= 0.0) || v != std::floor(v)) {
    throw ConfigError(name + ": expected a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

template <class T>
void add_real(std::map<std::string, ParamInfo>& r, const std::string& name, T SimulationConfig::*section,
              double T::*field) {
  r[name] = {[=](SimulationConfig& c, double v) { (c.*section).*field = v; },
             [=](const SimulationConfig& c) { return (c.*section).*field; }};
}

template <class T, class I>
void add_count(std::map<std::string, ParamInfo>& r, const std::string& name, T SimulationConfig::*section,
               I T::*field) {
  r[name] = {[=](SimulationConfig& c, double v) { (c.*section).*field = static_cast<I>(as_count(v, name)); },
             [=](const SimulationConfig& c) { return static_cast<double>((c.*section).*field); }};
}

void add_range(std::map<std::string, ParamInfo>& r, const std::string& name,
               AttributeRange TopologyParams::*field) {
  r[name + ".min"] = {[=](SimulationConfig& c, double v) { (c.topology.*field).min = v; },
                      [=](const SimulationConfig& c) { return (c.topology.*field).min; }};
  r[name + ".max"] = {[=](SimulationConfig& c, double v) { (c.topology.*field).max = v; },
                      [=](const SimulationConfig& c) { return (c.topology.*field).max; }};
}

std::map<std::string, ParamInfo> make_registry() {
  std::map<std::string, ParamInfo> r;
  using SC = SimulationConfig;

  add_count(r, "topology.n_peers", &SC::topology, &TopologyParams::n_peers);
  add_count(r, "topology.n_routers", &SC::topology, &TopologyParams::n_routers);
  add_real(r, "topology.down_up_ratio", &SC::topology, &TopologyParams::down_up_ratio);
  add_count(r, "topology.replica_slots", &SC::topology, &TopologyParams::replica_slots);
  add_count(r, "topology.service_queue_cap", &SC::topology, &TopologyParams::service_queue_cap);
  add_range(r, "topology.up_bps", &TopologyParams::up_bps);
  add_range(r, "topology.cpu", &TopologyParams::cpu);
  add_range(r, "topology.mem", &TopologyParams::mem);
  add_range(r, "topology.access_latency_ms", &TopologyParams::access_latency_ms);
  add_range(r, "topology.down_delay_ms", &TopologyParams::down_delay_ms);
  add_range(r, "topology.overlay_delay_ms", &TopologyParams::overlay_delay_ms);
  add_range(r, "topology.disk_capacity_bytes", &TopologyParams::disk_capacity_bytes);
  add_range(r, "topology.departure_prob", &TopologyParams::departure_prob);

  r["clustering.beta_weight"] = {
      [](SC& c, double v) { c.clustering.beta_weight = v; },
      [](const SC& c) { return c.clustering.beta_weight.value_or(0.0); }};
  add_count(r, "clustering.max_cluster_size", &SC::clustering, &ClusteringConfig::max_cluster_size);

  add_count(r, "placement.a_min", &SC::placement, &PlacementConfig::a_min);
  add_count(r, "placement.copies_class1", &SC::placement, &PlacementConfig::copies_class1);
  add_count(r, "placement.copies_class2", &SC::placement, &PlacementConfig::copies_class2);

  add_count(r, "balancing.s_th", &SC::balancing, &BalancingConfig::s_th);
  add_real(r, "balancing.load_diff_threshold", &SC::balancing, &BalancingConfig::load_diff_threshold);
  add_count(r, "balancing.alpha_cleanup", &SC::balancing, &BalancingConfig::alpha_cleanup);
  add_real(r, "balancing.report_period_ms", &SC::balancing, &BalancingConfig::report_period_ms);
  add_real(r, "balancing.cleanup_period_ms", &SC::balancing, &BalancingConfig::cleanup_period_ms);
  add_real(r, "balancing.imbalance_fraction", &SC::balancing, &BalancingConfig::imbalance_fraction);
  add_real(r, "balancing.departure_prob_threshold", &SC::balancing,
           &BalancingConfig::departure_prob_threshold);
  add_real(r, "balancing.departure_ewma", &SC::balancing, &BalancingConfig::departure_ewma);
  add_count(r, "balancing.inter_hot_items", &SC::balancing, &BalancingConfig::inter_hot_items);

  add_real(r, "workload.query_rate", &SC::workload, &WorkloadConfig::query_rate);
  add_real(r, "workload.offered_load_bps", &SC::workload, &WorkloadConfig::offered_load_bps);
  add_count(r, "workload.payload_bytes", &SC::workload, &WorkloadConfig::payload_bytes);
  add_real(r, "workload.zipf_s", &SC::workload, &WorkloadConfig::zipf_s);
  add_count(r, "workload.catalog_size", &SC::workload, &WorkloadConfig::catalog_size);
  add_real(r, "workload.duration_s", &SC::workload, &WorkloadConfig::duration_s);
  add_real(r, "workload.warmup_s", &SC::workload, &WorkloadConfig::warmup_s);
  add_real(r, "workload.churn_rate", &SC::workload, &WorkloadConfig::churn_rate);
  add_real(r, "workload.rejoin_delay_s", &SC::workload, &WorkloadConfig::rejoin_delay_s);
  add_real(r, "workload.classification_period_s", &SC::workload,
           &WorkloadConfig::classification_period_s);

  r["control_delay_ms"] = {[](SC& c, double v) { c.control_delay_ms = v; },
                           [](const SC& c) { return c.control_delay_ms; }};
  return r;
}

const std::vector<std::string>& bool_keys() {
  static const std::vector<std::string> keys = {"lb_enabled", "workload.churn_exempt_origins"};
  return keys;
}

void set_bool(ScenarioConfig& cfg, const std::string& key, bool v) {
  if (key == "lb_enabled") cfg.sim.lb_enabled = v;
  if (key == "workload.churn_exempt_origins") cfg.sim.workload.churn_exempt_origins = v;
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "yes" || s == "on" || s == "1") return out = true, true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return out = false, true;
  return false;
}

class Parser {
 public:
  Parser(ScenarioConfig& cfg, std::string source) : cfg_(cfg), source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    throw ConfigFileError(source_ + ":" + std::to_string(at.Mark().line + 1) + ": " + msg);
  }

  void note(const std::string& key, const YAML::Node& at) {
    cfg_.key_lines[key] = at.Mark().line + 1;
  }

  double number(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(n, key + ": expected a number");
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fail(n, key + ": expected a number, got '" + n.Scalar() + "'");
    }
  }

  void section(const YAML::Node& node, const std::string& prefix) {
    if (!node.IsMap()) fail(node, (prefix.empty() ? "config" : prefix) + ": expected a mapping");
    for (const auto& kv : node) {
      const std::string name = kv.first.as<std::string>();
      const std::string key = prefix.empty() ? name : prefix + "." + name;
      leaf(key, kv.first, kv.second);
    }
  }

  void leaf(const std::string& key, const YAML::Node& key_node, const YAML::Node& v) {
    const auto& reg = param_registry();
    note(key, key_node);

    if (key == "topology" || key == "clustering" || key == "placement" || key == "balancing" ||
        key == "workload" || key == "audit") {
      section(v, key);
      return;
    }
    if (key == "seed") {
      cfg_.sim.seed = static_cast<std::uint64_t>(count(v, key));
      return;
    }
    if (key == "audit.level") {
      cfg_.audit_level = static_cast<int>(count(v, key));
      return;
    }
    if (key == "sweep") {
      sweep(v);
      return;
    }
    if (std::find(bool_keys().begin(), bool_keys().end(), key) != bool_keys().end()) {
      bool b = false;
      if (!v.IsScalar() || !parse_bool(v.Scalar(), b)) fail(v, key + ": expected true or false");
      set_bool(cfg_, key, b);
      return;
    }
    if (key == "clustering.beta_weight" && v.IsScalar() && v.Scalar() == "median") {
      cfg_.sim.clustering.beta_weight.reset();
      return;
    }
    if (reg.contains(key + ".min")) {
      if (!v.IsSequence() || v.size() != 2) fail(v, key + ": expected [min, max]");
      apply(key + ".min", number(v[0], key), v);
      apply(key + ".max", number(v[1], key), v);
      return;
    }
    if (reg.contains(key)) {
      apply(key, number(v, key), v);
      return;
    }
    fail(key_node, "unknown key '" + key + "'");
  }

  double count(const YAML::Node& v, const std::string& key) const {
    const double d = number(v, key);
    if (d < 0 || d != std::floor(d)) fail(v, key + ": expected a non-negative integer");
    return d;
  }

  void apply(const std::string& key, double value, const YAML::Node& at) {
    try {
      set_param(cfg_.sim, key, value);
    } catch (const ConfigError& e) {
      fail(at, e.what());
    }
  }

  void sweep(const YAML::Node& v) {
    if (!v.IsMap()) fail(v, "sweep: expected a mapping");
    SweepSpec s;
    for (const auto& kv : v) {
      const std::string name = kv.first.as<std::string>();
      note("sweep." + name, kv.first);
      if (name == "param") {
        s.param = kv.second.as<std::string>();
        if (!is_sweepable(s.param)) fail(kv.second, "sweep.param: '" + s.param + "' is not a numeric field");
      } else if (name == "values") {
        if (!kv.second.IsSequence()) fail(kv.second, "sweep.values: expected a list");
        for (const auto& x : kv.second) s.values.push_back(number(x, "sweep.values"));
      } else if (name == "seeds") {
        s.seeds = static_cast<std::size_t>(count(kv.second, "sweep.seeds"));
      } else {
        fail(kv.first, "unknown key 'sweep." + name + "'");
      }
    }
    cfg_.sweep = std::move(s);
  }

 private:
  ScenarioConfig& cfg_;
  std::string source_;
};

}  // namespace

const std::map<std::string, ParamInfo>& param_registry() {
  static const std::map<std::string, ParamInfo> registry = make_registry();
  return registry;
}

bool is_sweepable(const std::string& name) { return param_registry().contains(name); }

void set_param(SimulationConfig& cfg, const std::string& name, double value) {
  auto it = param_registry().find(name);
  if (it == param_registry().end()) throw ConfigError("unknown parameter '" + name + "'");
  it->second.set(cfg, value);
}

void ScenarioConfig::validate() const {
  try {
    sim.validate();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    // The message leads with the field's leaf name; find where it was set.
    const std::string field = msg.substr(0, msg.find_first_of(": ("));
    for (const auto& [key, line] : key_lines) {
      const std::size_t dot = key.rfind('.');
      const std::string leaf = dot == std::string::npos ? key : key.substr(dot + 1);
      if (leaf == field) throw ConfigFileError(source + ":" + std::to_string(line) + ": " + msg);
    }
    throw ConfigFileError(source + ": " + msg);
  }
  if (sweep) {
    if (!is_sweepable(sweep->param)) throw ConfigFileError("sweep.param: unknown parameter '" + sweep->param + "'");
    if (sweep->seeds < 1) throw ConfigFileError("sweep.seeds: must be at least 1");
  }
}

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  ScenarioConfig cfg;
  cfg.source = source;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigFileError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull()) return cfg;
  Parser(cfg, source).section(root, "");
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigFileError(path + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigFileError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  if (std::find(bool_keys().begin(), bool_keys().end(), key) != bool_keys().end()) {
    bool b = false;
    if (!parse_bool(value, b)) throw ConfigFileError("--set " + key + ": expected true or false");
    set_bool(cfg, key, b);
    return;
  }
  if (key == "seed") {
    cfg.sim.seed = std::stoull(value);
    return;
  }
  if (key == "clustering.beta_weight" && value == "median") {
    cfg.sim.clustering.beta_weight.reset();
    return;
  }
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw ConfigFileError("--set " + key + ": expected a number, got '" + value + "'");
  }
  try {
    set_param(cfg.sim, key, v);
  } catch (const ConfigError& e) {
    throw ConfigFileError(std::string("--set: ") + e.what());
  }
  cfg.key_lines.erase(key);
}

}  // namespace clusterrep::cli
