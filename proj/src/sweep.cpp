#include "dvsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dvsim/random.hpp"
#include "dvsim/simulation.hpp"
#include "dvsim/text.hpp"
#include "dvsim/traffic.hpp"

namespace dvsim {
namespace {

using text::format_double;

constexpr const char* kRunsHeader =
    "metric,seed,topology_id,rate,duration,throughput_bps,e2ed_s,nrl,data_sent,"
    "data_delivered,routing_packets,drops_by_cause,metric_probes,pair_probes,pair_acks,"
    "full_dumps,incremental_dumps,route_computations,nodes,steady_throughput_bps,"
    "steady_e2ed_s,steady_nrl";

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string drops_field(const std::array<std::uint64_t, kDropCauseCount>& drops) {
  std::string s;
  for (std::size_t i = 0; i < kDropCauseCount; ++i) {
    if (i) s += ';';
    s += to_string(static_cast<DropCause>(i));
    s += ':';
    s += std::to_string(drops[i]);
  }
  return s;
}

std::optional<double> mean_present(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (!v) continue;
    sum += *v;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::string run_stem(MetricKind metric, double rate, std::size_t topology_id) {
  return std::string(to_string(metric)) + "_r" + format_double(rate) + "_t" +
         std::to_string(topology_id);
}

}  // namespace

Topology scenario_topology(const ScenarioConfig& cfg, std::size_t index) {
  if (!cfg.topology_file.empty()) {
    std::ifstream in(cfg.topology_file);
    if (!in) throw std::runtime_error("cannot open topology file '" + cfg.topology_file + "'");
    return read_topology(in);
  }
  return build_random_topology(cfg.nodes, cfg.area, cfg.link, derive_seed(cfg.seed, index));
}

std::uint64_t run_seed(const ScenarioConfig& cfg, std::size_t topology_id, double rate) {
  const auto topo_seed = derive_seed(cfg.seed, topology_id);
  return derive_seed(topo_seed, static_cast<std::uint64_t>(std::llround(rate * 1000.0)));
}

RunRow run_one(const ScenarioConfig& cfg, const Topology& topology, std::size_t topology_id,
               MetricKind metric, double rate, RunOutputs outputs) {
  // Pairs depend on the topology only; every rate and metric sees the same pairs.
  const auto flow_seed = derive_seed(derive_seed(cfg.seed, topology_id), 0xf10f);
  auto flows = start_flows(topology.size(), cfg.flows, rate, cfg.packet_size,
                           seconds(cfg.flow_start_s), seconds(cfg.duration_s), flow_seed);
  const auto seed = run_seed(cfg, topology_id, rate);

  Simulation sim(topology, metric, cfg.sim_params(), std::move(flows), seed);
  if (outputs.trace) sim.set_trace(outputs.trace);
  if (outputs.estimate_log && cfg.estimate_log_interval_s > 0.0) {
    sim.set_estimate_log(outputs.estimate_log, seconds(cfg.estimate_log_interval_s));
  }
  sim.run();

  const RunStats& s = sim.stats();
  if (auto violations = s.audit(); !violations.empty()) {
    std::string msg = "audit failed for " + run_stem(metric, rate, topology_id) + ":";
    for (const auto& v : violations) msg += " " + v + ";";
    throw std::logic_error(msg);
  }

  const SimTime duration = seconds(cfg.duration_s);
  RunRow row;
  row.metric = metric;
  row.seed = seed;
  row.topology_id = topology_id;
  row.rate = rate;
  row.duration = cfg.duration_s;
  row.throughput_bps = throughput(s, duration);
  row.e2ed_s = cfg.rtt ? mean_rtt(s) : e2ed(s);
  row.nrl = nrl(s);
  row.data_sent = s.data_sent;
  row.data_delivered = s.data_delivered;
  row.routing_packets = s.routing_packets_sent;
  row.drops = s.drops;
  row.routing = s.routing;
  row.route_computations = s.route_computations;
  row.nodes = topology.size();
  row.steady_throughput_bps = steady_throughput(s, duration);
  row.steady_e2ed_s = steady_e2ed(s);
  row.steady_nrl = steady_nrl(s);
  return row;
}

SweepResult run_scenario(const ScenarioConfig& cfg, unsigned workers, std::ostream* progress,
                         const std::optional<std::filesystem::path>& out_dir) {
  if (auto errors = validate_config(cfg); !errors.empty()) throw ConfigError(std::move(errors));

  std::vector<Topology> topologies;
  topologies.reserve(cfg.topologies);
  for (std::size_t i = 0; i < cfg.topologies; ++i) topologies.push_back(scenario_topology(cfg, i));

  struct Cell {
    MetricKind metric;
    double rate;
    std::size_t topology;
  };
  std::vector<Cell> cells;
  for (auto m : cfg.metrics) {
    for (double r : cfg.rates) {
      for (std::size_t t = 0; t < cfg.topologies; ++t) cells.push_back({m, r, t});
    }
  }

  const bool logs = out_dir && (cfg.trace || cfg.estimate_log_interval_s > 0.0);
  if (logs) std::filesystem::create_directories(*out_dir / "logs");

  std::vector<RunRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  std::size_t done = 0;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      const Cell& c = cells[i];
      try {
        std::ofstream trace;
        std::ofstream est;
        RunOutputs outputs;
        if (logs) {
          const auto stem = *out_dir / "logs" / run_stem(c.metric, c.rate, c.topology);
          if (cfg.trace) {
            trace.open(stem.string() + ".trace");
            outputs.trace = &trace;
          }
          if (cfg.estimate_log_interval_s > 0.0) {
            est.open(stem.string() + ".estimates.csv");
            outputs.estimate_log = &est;
          }
        }
        rows[i] = run_one(cfg, topologies[c.topology], c.topology, c.metric, c.rate, outputs);
        std::lock_guard lock(mu);
        ++done;
        if (progress) {
          *progress << "[" << done << "/" << cells.size() << "] " << to_string(c.metric)
                    << " rate=" << format_double(c.rate) << " topology=" << c.topology
                    << " delivered=" << rows[i].data_delivered << "/" << rows[i].data_sent
                    << '\n'
                    << std::flush;
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cells.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Cells were enumerated in metric, rate, topology order already; sort
  // anyway so the order is a property of the data, not of enumeration.
  std::stable_sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) {
    return std::tuple(static_cast<int>(a.metric), a.rate, a.topology_id) <
           std::tuple(static_cast<int>(b.metric), b.rate, b.topology_id);
  });

  SweepResult result;
  result.runs = std::move(rows);
  result.aggregates = aggregate(result.runs);
  return result;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRow>& runs) {
  std::map<std::pair<int, double>, std::vector<const RunRow*>> groups;
  for (const auto& r : runs) groups[{static_cast<int>(r.metric), r.rate}].push_back(&r);

  std::vector<AggregateRow> out;
  for (const auto& [key, members] : groups) {
    AggregateRow a;
    a.metric = static_cast<MetricKind>(key.first);
    a.rate = key.second;
    a.runs = members.size();
    std::vector<std::optional<double>> delays;
    std::vector<std::optional<double>> loads;
    for (const RunRow* r : members) {
      a.throughput_bps += r->throughput_bps;
      a.data_sent += static_cast<double>(r->data_sent);
      a.data_delivered += static_cast<double>(r->data_delivered);
      a.routing_packets += static_cast<double>(r->routing_packets);
      delays.push_back(r->e2ed_s);
      loads.push_back(r->nrl);
    }
    const auto n = static_cast<double>(a.runs);
    a.throughput_bps /= n;
    a.data_sent /= n;
    a.data_delivered /= n;
    a.routing_packets /= n;
    a.e2ed_s = mean_present(delays);
    a.nrl = mean_present(loads);
    out.push_back(a);
  }
  return out;
}

void write_runs_csv(std::ostream& os, const std::vector<RunRow>& runs) {
  os << kRunsHeader << '\n';
  for (const auto& r : runs) {
    os << to_string(r.metric) << ',' << r.seed << ',' << r.topology_id << ','
       << format_double(r.rate) << ',' << format_double(r.duration) << ','
       << format_double(r.throughput_bps) << ',' << opt(r.e2ed_s) << ',' << opt(r.nrl) << ','
       << r.data_sent << ',' << r.data_delivered << ',' << r.routing_packets << ','
       << drops_field(r.drops) << ',' << r.routing.metric_probes << ','
       << r.routing.pair_probes << ',' << r.routing.pair_acks << ',' << r.routing.full_dumps
       << ',' << r.routing.incremental_dumps << ',' << r.route_computations << ',' << r.nodes
       << ',' << format_double(r.steady_throughput_bps) << ',' << opt(r.steady_e2ed_s) << ','
       << opt(r.steady_nrl) << '\n';
  }
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "metric,rate,runs,throughput_bps,e2ed_s,nrl,data_sent,data_delivered,routing_packets\n";
  for (const auto& a : rows) {
    os << to_string(a.metric) << ',' << format_double(a.rate) << ',' << a.runs << ','
       << format_double(a.throughput_bps) << ',' << opt(a.e2ed_s) << ',' << opt(a.nrl) << ','
       << format_double(a.data_sent) << ',' << format_double(a.data_delivered) << ','
       << format_double(a.routing_packets) << '\n';
  }
}

std::vector<RunRow> read_runs_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || text::trim(line) != kRunsHeader) {
    throw std::runtime_error("runs CSV: missing or unexpected header");
  }
  std::vector<RunRow> rows;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto f = text::split(line, ',');
    auto fail = [&](const std::string& what) {
      return std::runtime_error("runs CSV line " + std::to_string(line_no) + ": " + what);
    };
    if (f.size() != 22) throw fail("expected 22 fields");
    auto num = [&](std::size_t i) {
      auto v = text::parse_double(f[i]);
      if (!v) throw fail("bad number in column " + std::to_string(i + 1));
      return *v;
    };
    auto maybe = [&](std::size_t i) -> std::optional<double> {
      if (text::trim(f[i]).empty()) return std::nullopt;
      return num(i);
    };
    auto count = [&](std::size_t i) {
      auto v = text::parse_int(f[i]);
      if (!v || *v < 0) throw fail("bad count in column " + std::to_string(i + 1));
      return static_cast<std::uint64_t>(*v);
    };
    RunRow r;
    auto m = parse_metric(f[0]);
    if (!m) throw fail("unknown metric");
    r.metric = *m;
    // Seeds use the full 64-bit range.
    try {
      r.seed = std::stoull(std::string(f[1]));
    } catch (const std::exception&) {
      throw fail("bad seed");
    }
    r.topology_id = count(2);
    r.rate = num(3);
    r.duration = num(4);
    r.throughput_bps = num(5);
    r.e2ed_s = maybe(6);
    r.nrl = maybe(7);
    r.data_sent = count(8);
    r.data_delivered = count(9);
    r.routing_packets = count(10);
    const auto causes = text::split(f[11], ';');
    if (causes.size() != kDropCauseCount) throw fail("bad drops_by_cause");
    for (std::size_t i = 0; i < kDropCauseCount; ++i) {
      const auto colon = causes[i].find(':');
      if (colon == std::string_view::npos ||
          causes[i].substr(0, colon) != to_string(static_cast<DropCause>(i))) {
        throw fail("bad drops_by_cause");
      }
      auto v = text::parse_int(causes[i].substr(colon + 1));
      if (!v || *v < 0) throw fail("bad drops_by_cause");
      r.drops[i] = static_cast<std::uint64_t>(*v);
    }
    r.routing.metric_probes = count(12);
    r.routing.pair_probes = count(13);
    r.routing.pair_acks = count(14);
    r.routing.full_dumps = count(15);
    r.routing.incremental_dumps = count(16);
    r.route_computations = count(17);
    r.nodes = count(18);
    r.steady_throughput_bps = num(19);
    r.steady_e2ed_s = maybe(20);
    r.steady_nrl = maybe(21);
    rows.push_back(r);
  }
  return rows;
}

void write_sweep(const std::filesystem::path& dir, const ScenarioConfig& cfg,
                 const SweepResult& result) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("runs.csv");
    write_runs_csv(out, result.runs);
  }
  {
    auto out = open("aggregate.csv");
    write_aggregate_csv(out, result.aggregates);
  }
  {
    auto out = open("config.txt");
    write_config(out, cfg);
  }
  if (!result.aggregates.empty()) {
    auto out = open("summary.txt");
    write_summary(out, summarize(result.aggregates));
  }
}

Summary summarize(const std::vector<AggregateRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("summarize: no results");

  std::vector<double> rates;
  for (const auto& r : rows) rates.push_back(r.rate);
  std::sort(rates.begin(), rates.end());
  rates.erase(std::unique(rates.begin(), rates.end()), rates.end());

  Summary out;
  struct Param {
    const char* name;
    bool higher_is_better;
    std::optional<double> (*get)(const AggregateRow&);
  };
  const Param params[] = {
      {"throughput_bps", true, [](const AggregateRow& a) -> std::optional<double> {
         return a.throughput_bps;
       }},
      {"e2ed_s", false, [](const AggregateRow& a) { return a.e2ed_s; }},
      {"nrl", false, [](const AggregateRow& a) { return a.nrl; }},
  };
  for (const auto& p : params) {
    for (double rate : rates) {
      std::vector<std::pair<double, MetricKind>> vals;
      for (const auto& a : rows) {
        if (a.rate != rate) continue;
        if (auto v = p.get(a)) vals.emplace_back(*v, a.metric);
      }
      std::stable_sort(vals.begin(), vals.end(), [&](const auto& x, const auto& y) {
        return p.higher_is_better ? x.first > y.first : x.first < y.first;
      });
      Ranking rk{p.name, rate, {}};
      for (const auto& v : vals) rk.order.push_back(v.second);
      out.rankings.push_back(std::move(rk));
    }
  }

  // Means across rates for the routing-load claims.
  std::map<MetricKind, std::vector<std::optional<double>>> loads;
  for (const auto& a : rows) loads[a.metric].push_back(a.nrl);
  std::map<MetricKind, double> mean_load;
  for (const auto& [m, v] : loads) {
    if (auto x = mean_present(v)) mean_load[m] = *x;
  }

  {
    Claim c{"ETT has the highest routing load", std::nullopt, {}};
    if (mean_load.count(MetricKind::kEtt) && mean_load.size() > 1) {
      bool holds = true;
      for (const auto& [m, v] : mean_load) {
        if (m != MetricKind::kEtt && v >= mean_load[MetricKind::kEtt]) holds = false;
      }
      c.holds = holds;
      c.detail = "mean nrl ett=" + format_double(mean_load[MetricKind::kEtt]);
    }
    out.claims.push_back(c);
  }
  {
    Claim c{"MD has the lowest routing load among probing metrics", std::nullopt, {}};
    std::size_t probing = 0;
    for (const auto& [m, v] : mean_load) probing += m != MetricKind::kHop;
    if (mean_load.count(MetricKind::kMd) && probing > 1) {
      bool holds = true;
      for (const auto& [m, v] : mean_load) {
        if (m != MetricKind::kHop && m != MetricKind::kMd && v <= mean_load[MetricKind::kMd]) {
          holds = false;
        }
      }
      c.holds = holds;
      c.detail = "mean nrl md=" + format_double(mean_load[MetricKind::kMd]);
    }
    out.claims.push_back(c);
  }
  {
    Claim c{"InvETX leads throughput at high rates", std::nullopt, {}};
    const std::size_t first_high = rates.size() / 2;
    bool present = false;
    bool holds = true;
    std::size_t lead = 0;
    std::size_t checked = 0;
    for (std::size_t i = first_high; i < rates.size(); ++i) {
      for (const auto& rk : out.rankings) {
        if (rk.parameter != "throughput_bps" || rk.rate != rates[i] || rk.order.size() < 2) {
          continue;
        }
        if (std::find(rk.order.begin(), rk.order.end(), MetricKind::kInvEtx) == rk.order.end()) {
          continue;
        }
        present = true;
        ++checked;
        if (rk.order.front() == MetricKind::kInvEtx) {
          ++lead;
        } else {
          holds = false;
        }
      }
    }
    if (present) {
      c.holds = holds;
      c.detail = "first at " + std::to_string(lead) + " of " + std::to_string(checked) + " rates";
    }
    out.claims.push_back(c);
  }
  return out;
}

void write_summary(std::ostream& os, const Summary& summary) {
  std::string last;
  for (const auto& rk : summary.rankings) {
    if (rk.parameter != last) {
      os << "# " << rk.parameter << " (best first)\n";
      last = rk.parameter;
    }
    os << "rate " << format_double(rk.rate) << ':';
    for (auto m : rk.order) os << ' ' << to_string(m);
    os << '\n';
  }
  os << "# claims\n";
  for (const auto& c : summary.claims) {
    os << (c.holds ? (*c.holds ? "holds" : "fails") : "n/a") << ": " << c.description;
    if (!c.detail.empty()) os << " (" << c.detail << ')';
    os << '\n';
  }
}

cost::CostParams params_from_run(const RunRow& row, cost::CostParams base) {
  const double tau = row.duration;
  base.tau_nl = tau;
  base.alpha_df = base.alpha_dr = base.alpha_s_probes = base.alpha_l_probes = 0.0;
  if (tau <= 0.0) return base;
  const double probes = static_cast<double>(row.routing.metric_probes);
  const double pairs = static_cast<double>(row.routing.pair_probes);
  switch (row.metric) {
    case MetricKind::kHop:
      break;
    case MetricKind::kEtx:
    case MetricKind::kInvEtx:
    case MetricKind::kMl:
      base.alpha_df = base.alpha_dr = probes / (2.0 * tau);
      break;
    case MetricKind::kEtt:
      base.alpha_df = base.alpha_dr = probes / (2.0 * tau);
      base.alpha_s_probes = base.alpha_l_probes = pairs / (2.0 * tau);
      break;
    case MetricKind::kMd:
      base.alpha_df = pairs / (2.0 * tau);
      break;
  }
  return base;
}

}  // namespace dvsim
