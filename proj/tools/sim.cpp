#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "dvsim/config.hpp"
#include "dvsim/cost_model.hpp"
#include "dvsim/sweep.hpp"
#include "dvsim/text.hpp"
#include "dvsim/topology.hpp"

namespace fs = std::filesystem;
using namespace dvsim;

namespace {

fs::path default_out_dir() {
  if (const char* env = std::getenv("DVSIM_OUT_DIR"); env && *env) return env;
  return "results";
}

ScenarioConfig load_valid(const std::string& path) {
  ScenarioConfig cfg = load_config(path);
  if (auto errors = validate_config(cfg); !errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

std::vector<RunRow> load_runs(const fs::path& dir) {
  std::ifstream in(dir / "runs.csv");
  if (!in) throw std::runtime_error("cannot open " + (dir / "runs.csv").string());
  return read_runs_csv(in);
}

void write_breakdown_header(std::ostream& os) { os << "c_per,c_tri,c_metric,c_total"; }

void write_breakdown(std::ostream& os, const cost::CostBreakdown& b) {
  os << text::format_double(b.c_per) << ',' << text::format_double(b.c_tri) << ','
     << text::format_double(b.c_metric) << ',' << text::format_double(b.c_total);
}

cost::CostParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open parameter file '" + path + "'");
  return cost::read_params(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DSDV link-metric simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned workers = 1;
  auto* run = app.add_subcommand("run", "Run the sweep described by a config file");
  run->add_option("--config", config_path, "Scenario config file")->required();
  run->add_option("--out", out_dir, "Output directory (default $DVSIM_OUT_DIR or ./results)");
  run->add_option("--workers", workers, "Parallel runs")->check(CLI::PositiveNumber);
  bool quiet = false;
  run->add_flag("--quiet", quiet, "No per-run log lines");

  std::string params_path;
  std::string from_run;
  std::string metric_name;
  auto* cost_cmd = app.add_subcommand("cost", "Evaluate the routing-overhead cost model");
  auto* params_opt = cost_cmd->add_option("--params", params_path, "Parameter file");
  auto* from_opt =
      cost_cmd->add_option("--from-run", from_run, "Sweep output directory to take rates from");
  cost_cmd->add_option("--metric", metric_name, "Metric for --params mode (default: all)");
  cost_cmd->callback([&] {
    if (params_opt->count() == 0 && from_opt->count() == 0) {
      throw CLI::ValidationError("cost", "one of --params or --from-run is required");
    }
  });

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config file");
  validate->add_option("--config", validate_path, "Scenario config file")->required();

  std::string summarize_dir;
  auto* summarize_cmd = app.add_subcommand("summarize", "Rank metrics from a sweep output");
  summarize_cmd->add_option("--in", summarize_dir, "Sweep output directory")->required();

  std::string defaults_path;
  auto* defaults = app.add_subcommand("defaults", "Print the default config");
  defaults->add_option("--out", defaults_path, "Write to file instead of stdout");

  std::string topo_config;
  std::size_t topo_index = 0;
  auto* topology = app.add_subcommand("topology", "Print one scenario topology");
  topology->add_option("--config", topo_config, "Scenario config file")->required();
  topology->add_option("--index", topo_index, "Topology index");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ScenarioConfig cfg = load_valid(config_path);
      const fs::path dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
      fs::create_directories(dir);
      {
        // Fail on an unwritable directory before spending time on runs.
        std::ofstream probe(dir / "runs.csv");
        if (!probe) throw std::runtime_error("cannot write to " + dir.string());
      }
      auto result = run_scenario(cfg, workers, quiet ? nullptr : &std::cerr, dir);
      write_sweep(dir, cfg, result);
      std::cerr << "wrote " << result.runs.size() << " runs to " << dir.string() << '\n';
    } else if (*cost_cmd) {
      cost::CostParams base;
      if (!params_path.empty()) base = load_params(params_path);
      if (!from_run.empty()) {
        std::cout << "metric,topology_id,rate,";
        write_breakdown_header(std::cout);
        std::cout << ",observed_probe_packets\n";
        for (const auto& row : load_runs(from_run)) {
          const auto p = params_from_run(row, base);
          const auto observed = row.metric == MetricKind::kMd
                                    ? row.routing.pair_probes
                                    : row.routing.metric_probes + row.routing.pair_probes;
          std::cout << to_string(row.metric) << ',' << row.topology_id << ','
                    << text::format_double(row.rate) << ',';
          write_breakdown(std::cout, cost::c_total(row.metric, p));
          std::cout << ',' << (row.metric == MetricKind::kHop ? 0 : observed) << '\n';
        }
      } else {
        std::vector<MetricKind> kinds(kAllMetrics.begin(), kAllMetrics.end());
        if (!metric_name.empty()) {
          auto m = parse_metric(metric_name);
          if (!m) throw std::runtime_error("unknown metric '" + metric_name + "'");
          kinds = {*m};
        }
        std::cout << "metric,";
        write_breakdown_header(std::cout);
        std::cout << '\n';
        for (auto k : kinds) {
          std::cout << to_string(k) << ',';
          write_breakdown(std::cout, cost::c_total(k, base));
          std::cout << '\n';
        }
      }
    } else if (*validate) {
      const ScenarioConfig cfg = load_config(validate_path);
      const auto errors = validate_config(cfg);
      for (const auto& e : errors) std::cerr << "error: " << e << '\n';
      if (!errors.empty()) return 1;
      std::cout << "ok\n";
    } else if (*summarize_cmd) {
      const auto runs = load_runs(summarize_dir);
      write_summary(std::cout, summarize(aggregate(runs)));
    } else if (*defaults) {
      if (defaults_path.empty()) {
        write_config(std::cout, ScenarioConfig{});
      } else {
        std::ofstream out(defaults_path);
        if (!out) throw std::runtime_error("cannot write " + defaults_path);
        write_config(out, ScenarioConfig{});
      }
    } else if (*topology) {
      const ScenarioConfig cfg = load_valid(topo_config);
      write_topology(std::cout, scenario_topology(cfg, topo_index));
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
