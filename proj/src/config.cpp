#include "dvsim/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "dvsim/text.hpp"

namespace dvsim {
namespace {

using text::format_double;

struct Field {
  const char* key;
  std::function<std::string(const ScenarioConfig&)> get;
  // Returns an error message, empty on success.
  std::function<std::string(ScenarioConfig&, std::string_view)> set;
};

template <typename T>
Field real(const char* key, T ScenarioConfig::*member) {
  return {key, [member](const ScenarioConfig& c) { return format_double(c.*member); },
          [member](ScenarioConfig& c, std::string_view v) -> std::string {
            auto d = text::parse_double(v);
            if (!d) return "expected a number";
            c.*member = *d;
            return {};
          }};
}

Field real_ref(const char* key, std::function<double&(ScenarioConfig&)> ref) {
  return {key,
          [ref](const ScenarioConfig& c) {
            return format_double(ref(const_cast<ScenarioConfig&>(c)));
          },
          [ref](ScenarioConfig& c, std::string_view v) -> std::string {
            auto d = text::parse_double(v);
            if (!d) return "expected a number";
            ref(c) = *d;
            return {};
          }};
}

template <typename T>
Field integer(const char* key, T ScenarioConfig::*member) {
  return {key, [member](const ScenarioConfig& c) { return std::to_string(c.*member); },
          [member](ScenarioConfig& c, std::string_view v) -> std::string {
            T out{};
            const auto* end = v.data() + v.size();
            const auto [ptr, ec] = std::from_chars(v.data(), end, out);
            if (ec != std::errc{} || ptr != end) {
              if (std::is_unsigned_v<T> && !v.empty() && v.front() == '-') return "must be >= 0";
              return "expected an integer";
            }
            c.*member = out;
            return {};
          }};
}

Field boolean(const char* key, bool ScenarioConfig::*member) {
  return {key, [member](const ScenarioConfig& c) { return std::string(c.*member ? "true" : "false"); },
          [member](ScenarioConfig& c, std::string_view v) -> std::string {
            if (v == "true" || v == "1") c.*member = true;
            else if (v == "false" || v == "0") c.*member = false;
            else return "expected true or false";
            return {};
          }};
}

Field delay(MetricKind kind) {
  static const std::map<MetricKind, std::string> names = [] {
    std::map<MetricKind, std::string> m;
    for (auto k : kAllMetrics) m[k] = "computation_delay_" + std::string(to_string(k));
    return m;
  }();
  const auto i = static_cast<std::size_t>(kind);
  return real_ref(names.at(kind).c_str(),
                  [i](ScenarioConfig& c) -> double& { return c.computation_delay_s[i]; });
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = [] {
    std::vector<Field> f;
    f.push_back(integer("nodes", &ScenarioConfig::nodes));
    f.push_back(real_ref("area_width", [](ScenarioConfig& c) -> double& { return c.area.width; }));
    f.push_back(real_ref("area_height", [](ScenarioConfig& c) -> double& { return c.area.height; }));
    f.push_back(real_ref("comm_range", [](ScenarioConfig& c) -> double& { return c.link.comm_range_m; }));
    f.push_back(real_ref("inner_range", [](ScenarioConfig& c) -> double& { return c.link.inner_range_m; }));
    f.push_back(real_ref("p_max", [](ScenarioConfig& c) -> double& { return c.link.p_max; }));
    f.push_back(real_ref("bandwidth_max", [](ScenarioConfig& c) -> double& { return c.link.bandwidth_max_bps; }));
    f.push_back(real_ref("bandwidth_min", [](ScenarioConfig& c) -> double& { return c.link.bandwidth_min_bps; }));
    f.push_back(real_ref("propagation_delay", [](ScenarioConfig& c) -> double& { return c.link.propagation_delay_s; }));
    f.push_back(real_ref("asymmetry_fraction", [](ScenarioConfig& c) -> double& { return c.link.asymmetry_fraction; }));
    f.push_back(real_ref("asymmetry_factor", [](ScenarioConfig& c) -> double& { return c.link.asymmetry_factor; }));
    f.push_back({"metrics",
                 [](const ScenarioConfig& c) {
                   std::string s;
                   for (auto m : c.metrics) {
                     if (!s.empty()) s += ',';
                     s += to_string(m);
                   }
                   return s;
                 },
                 [](ScenarioConfig& c, std::string_view v) -> std::string {
                   c.metrics.clear();
                   if (text::trim(v).empty()) return {};
                   for (auto part : text::split(v, ',')) {
                     auto m = parse_metric(text::trim(part));
                     if (!m) return "unknown metric '" + std::string(text::trim(part)) + "'";
                     c.metrics.push_back(*m);
                   }
                   return {};
                 }});
    f.push_back(real("probe_period", &ScenarioConfig::probe_period_s));
    f.push_back(real("window", &ScenarioConfig::window_s));
    f.push_back(real("pair_interval", &ScenarioConfig::pair_interval_s));
    f.push_back(real("md_pair_interval", &ScenarioConfig::md_pair_interval_s));
    f.push_back(integer("pair_samples", &ScenarioConfig::pair_samples));
    f.push_back(real("full_dump_period", &ScenarioConfig::full_dump_period_s));
    f.push_back(real("incremental_min_interval", &ScenarioConfig::incremental_min_interval_s));
    f.push_back(real("dead_link_threshold", &ScenarioConfig::dead_link_threshold));
    f.push_back(integer("retry_limit", &ScenarioConfig::retry_limit));
    f.push_back(integer("ttl", &ScenarioConfig::ttl));
    f.push_back(real("clock_offset_max", &ScenarioConfig::clock_offset_max_s));
    for (auto k : kAllMetrics) f.push_back(delay(k));
    f.push_back(integer("flows", &ScenarioConfig::flows));
    f.push_back(integer("packet_size", &ScenarioConfig::packet_size));
    f.push_back({"rates",
                 [](const ScenarioConfig& c) {
                   std::string s;
                   for (double r : c.rates) {
                     if (!s.empty()) s += ',';
                     s += format_double(r);
                   }
                   return s;
                 },
                 [](ScenarioConfig& c, std::string_view v) -> std::string {
                   c.rates.clear();
                   if (text::trim(v).empty()) return {};
                   for (auto part : text::split(v, ',')) {
                     auto d = text::parse_double(part);
                     if (!d) return "expected comma-separated numbers";
                     c.rates.push_back(*d);
                   }
                   return {};
                 }});
    f.push_back(real("flow_start", &ScenarioConfig::flow_start_s));
    f.push_back(real("duration", &ScenarioConfig::duration_s));
    f.push_back(real("warmup", &ScenarioConfig::warmup_s));
    f.push_back(boolean("rtt", &ScenarioConfig::rtt));
    f.push_back(integer("topologies", &ScenarioConfig::topologies));
    f.push_back(integer("seed", &ScenarioConfig::seed));
    f.push_back({"topology_file", [](const ScenarioConfig& c) { return c.topology_file; },
                 [](ScenarioConfig& c, std::string_view v) -> std::string {
                   c.topology_file = std::string(v);
                   return {};
                 }});
    f.push_back(boolean("trace", &ScenarioConfig::trace));
    f.push_back(real("estimate_log_interval", &ScenarioConfig::estimate_log_interval_s));
    return f;
  }();
  return all;
}

bool probability(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

SimParams ScenarioConfig::sim_params() const {
  SimParams p;
  auto& e = p.estimator;
  e.probe_period = seconds(probe_period_s);
  e.window = seconds(window_s);
  e.md_pair_interval = seconds(md_pair_interval_s);
  e.md_window = seconds(std::max(window_s, 3.0 * md_pair_interval_s));
  e.update_period = seconds(full_dump_period_s);
  e.update_window = seconds(std::max(window_s, 3.0 * full_dump_period_s));
  e.pair_samples = pair_samples;
  e.frame_bytes = packet_size;
  e.nominal_bandwidth_bps = link.bandwidth_max_bps;
  e.dead_link_threshold = dead_link_threshold;
  p.pair_interval = seconds(pair_interval_s);
  p.full_dump_period = seconds(full_dump_period_s);
  p.incremental_min_interval = seconds(incremental_min_interval_s);
  p.retry_limit = retry_limit;
  p.ttl = ttl;
  p.duration = seconds(duration_s);
  p.warmup = seconds(warmup_s);
  p.rtt = rtt;
  p.clock_offset_max_s = clock_offset_max_s;
  p.computation_delay_s = computation_delay_s;
  return p;
}

std::vector<std::string> validate_config(const ScenarioConfig& c) {
  std::vector<std::string> e;
  auto need = [&](bool ok, const char* field, const std::string& msg) {
    if (!ok) e.push_back(std::string(field) + ": " + msg);
  };
  need(c.nodes >= 2, "nodes", "must be >= 2");
  need(c.area.width > 0.0, "area_width", "must be > 0");
  need(c.area.height > 0.0, "area_height", "must be > 0");
  need(c.link.comm_range_m > 0.0, "comm_range", "must be > 0");
  need(c.link.inner_range_m >= 0.0 && c.link.inner_range_m <= c.link.comm_range_m, "inner_range",
       "must be in [0, comm_range]");
  need(probability(c.link.p_max), "p_max", "must be in [0,1]");
  need(c.link.bandwidth_max_bps > 0.0, "bandwidth_max", "must be > 0");
  need(c.link.bandwidth_min_bps > 0.0 && c.link.bandwidth_min_bps <= c.link.bandwidth_max_bps,
       "bandwidth_min", "must be in (0, bandwidth_max]");
  need(c.link.propagation_delay_s >= 0.0, "propagation_delay", "must be >= 0");
  need(probability(c.link.asymmetry_fraction), "asymmetry_fraction", "must be in [0,1]");
  need(probability(c.link.asymmetry_factor), "asymmetry_factor", "must be in [0,1]");
  need(!c.metrics.empty(), "metrics", "at least one metric required");
  need(c.probe_period_s > 0.0, "probe_period", "must be > 0");
  need(c.window_s >= c.probe_period_s, "window", "must be >= probe_period");
  need(c.pair_interval_s > 0.0, "pair_interval", "must be > 0");
  need(c.md_pair_interval_s > 0.0, "md_pair_interval", "must be > 0");
  need(c.pair_samples >= 1, "pair_samples", "must be >= 1");
  need(c.full_dump_period_s > 0.0, "full_dump_period", "must be > 0");
  need(c.incremental_min_interval_s >= 0.0, "incremental_min_interval", "must be >= 0");
  need(probability(c.dead_link_threshold), "dead_link_threshold", "must be in [0,1]");
  need(c.retry_limit >= 0, "retry_limit", "must be >= 0");
  need(c.ttl >= 1, "ttl", "must be >= 1");
  need(c.clock_offset_max_s >= 0.0, "clock_offset_max", "must be >= 0");
  for (auto k : kAllMetrics) {
    if (!(c.computation_delay_s[static_cast<std::size_t>(k)] >= 0.0)) {
      e.push_back("computation_delay_" + std::string(to_string(k)) + ": must be >= 0");
    }
  }
  need(c.flows >= 1, "flows", "must be >= 1");
  need(c.nodes < 2 || c.flows <= c.nodes * (c.nodes - 1), "flows",
       "must be <= nodes*(nodes-1)");
  need(c.packet_size >= 1, "packet_size", "must be >= 1");
  need(!c.rates.empty(), "rates", "at least one rate required");
  for (double r : c.rates) {
    if (!(r >= 1.0)) {
      e.push_back("rates: rate must be >= 1");
      break;
    }
  }
  need(c.duration_s > 0.0, "duration", "must be > 0");
  need(c.flow_start_s >= 0.0 && c.flow_start_s < c.duration_s, "flow_start",
       "must be in [0, duration)");
  need(c.warmup_s >= 0.0 && c.warmup_s < c.duration_s, "warmup", "must be in [0, duration)");
  need(c.topologies >= 1, "topologies", "must be >= 1");
  need(c.estimate_log_interval_s >= 0.0, "estimate_log_interval", "must be >= 0");
  return e;
}

ScenarioConfig parse_config(std::istream& is) {
  ScenarioConfig cfg;
  std::vector<std::string> errors;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto body = text::trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      errors.push_back(where + ": expected key = value");
      continue;
    }
    const auto key = text::trim(body.substr(0, eq));
    const auto value = text::trim(body.substr(eq + 1));
    bool found = false;
    for (const auto& f : fields()) {
      if (key != f.key) continue;
      found = true;
      if (auto err = f.set(cfg, value); !err.empty()) {
        errors.push_back(std::string(key) + " (" + where + "): " + err);
      }
    }
    if (!found) errors.push_back(where + ": unknown key '" + std::string(key) + "'");
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  return parse_config(in);
}

void write_config(std::ostream& os, const ScenarioConfig& cfg) {
  for (const auto& f : fields()) os << f.key << " = " << f.get(cfg) << '\n';
}

}  // namespace dvsim
