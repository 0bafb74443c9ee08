// symsynth: reach-avoid controller synthesis from the command line.
//
//   symsynth run --config configs/ship.json --strategy 5 --resolution 30 --validate
//   symsynth compare --strategies 0,1,5 --resolution 20
//   symsynth default-config --toy > toy.json

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symsynth/cli/scenario.hpp"
#include "symsynth/validation/simulate.hpp"

namespace fs = std::filesystem;
using namespace symsynth;

namespace {

struct Common {
  std::string config;
  std::optional<std::size_t> resolution;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir = "out";
  std::string reuse;
};

cli::Scenario load(const Common& c) {
  cli::Scenario s = c.config.empty() ? cli::ship_scenario() : cli::load_scenario(c.config);
  if (c.resolution) {
    if (*c.resolution == 0) throw cli::ConfigError("--resolution: must be positive");
    s.grid_counts = {*c.resolution, *c.resolution, *c.resolution};
  }
  if (c.seed_given) s.seed = c.seed;
  cli::validate(s);
  return s;
}

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_metrics(const std::vector<synthesis::Metrics>& rows) {
  std::cout << synthesis::metrics_header() << '\n';
  for (const auto& m : rows) std::cout << synthesis::metrics_row(m) << '\n';
}

cli::Prepared prepare(const cli::Scenario& s, const Common& c) {
  fs::create_directories(c.out_dir);
  const std::string rd_path = c.reuse.empty() ? (fs::path(c.out_dir) / "reachdict.json").string() : c.reuse;
  cli::Prepared p = cli::prepare(s, c.reuse.empty() ? std::nullopt : std::optional<std::string>(rd_path));
  if (c.reuse.empty()) reach::save_reach_dict(p.rd, rd_path);
  std::cerr << "grid " << p.scene.grid.describe() << ": " << p.cls.normal << " normal, " << p.cls.reach
            << " reach, " << p.cls.avoid << " avoid cells; reach dict "
            << (p.reach_dict_loaded ? "loaded" : "computed") << " in " << p.reach_dict_s << " s\n";
  return p;
}

int run(const Common& c, const std::string& strategy_override, bool validate, std::size_t rollouts) {
  cli::Scenario s = load(c);
  if (!strategy_override.empty()) s.strategy = strategy_override;
  cli::validate(s);
  const cli::Prepared p = prepare(s, c);
  const auto out = cli::run_strategy(p, s.strategy, s.seed, s.m);
  cli::write_run_artifacts(c.out_dir, p, out);
  synthesis::write_metrics_csv((fs::path(c.out_dir) / "metrics.csv").string(), {out.metrics});
  print_metrics({out.metrics});

  int status = 0;
  const std::size_t n = rollouts ? rollouts : (validate ? 200 : 0);
  if (n > 0) {
    const auto summary = cli::run_rollouts(p, out.controller, n, s.seed, rollouts > 0);
    if (rollouts > 0) {
      const fs::path dir = fs::path(c.out_dir) / "rollouts";
      fs::create_directories(dir);
      for (std::size_t i = 0; i < summary.rollouts.size(); ++i) {
        validation::write_rollout_csv((dir / ("rollout_" + std::to_string(i) + ".csv")).string(),
                                      summary.rollouts[i]);
      }
    }
    std::cerr << "rollouts: " << summary.total;
    for (const auto& [v, k] : summary.verdicts) std::cerr << ", " << v << " " << k;
    std::cerr << '\n';
    if (validate && summary.count(validation::Verdict::Reached) != summary.total) status = 1;
  }
  if (validate) {
    if (const auto bad = synthesis::replay_assignments(*p.oracle, p.cls, out.result)) {
      std::cerr << "assignment replay failed at cell " << *bad << '\n';
      status = 1;
    }
    for (auto mode : {validation::DisturbanceSampler::Mode::Uniform,
                      validation::DisturbanceSampler::Mode::BangBang}) {
      const auto rep = validation::check_tube_containment(*p.oracle, p.rd, s.disturbance_box, 1000,
                                                          s.seed, mode);
      std::cerr << "tube containment (" << (mode == validation::DisturbanceSampler::Mode::Uniform ? "uniform" : "bang-bang")
                << "): " << rep.violations << " violations in " << rep.samples << " samples\n";
      if (rep.violations) status = 1;
    }
    std::cerr << (status ? "validation FAILED\n" : "validation passed\n");
  }
  return status;
}

int compare(const Common& c, const std::string& list) {
  const cli::Scenario s = load(c);
  const auto ids = split(list);
  for (const auto& id : ids) {
    try {
      (void)synthesis::strategy(id);
    } catch (const std::invalid_argument& e) {
      throw cli::ConfigError(std::string("--strategies: ") + e.what());
    }
  }
  const cli::Prepared p = prepare(s, c);
  const auto cmp = cli::compare_strategies(p, ids, s.seed);
  std::vector<synthesis::Metrics> rows;
  for (const auto& r : cmp.runs) {
    rows.push_back(r.metrics);
    cli::write_run_artifacts(c.out_dir, p, r);
  }
  synthesis::write_metrics_csv((fs::path(c.out_dir) / "metrics.csv").string(), rows);
  print_metrics(rows);
  for (const auto& [id, x] : cmp.speedup) std::cerr << "speedup of strategy " << id << " over 0: " << x << '\n';
  for (const auto& m : cmp.messages) std::cerr << m << '\n';
  std::cerr << (cmp.equivalent ? "controlled sets consistent\n" : "controlled sets INCONSISTENT\n");
  return cmp.equivalent ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reach-avoid controller synthesis with symmetry-guided control search"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Scenario JSON (default: built-in ship scenario)");
    sub->add_option("--resolution", common.resolution, "Cells per state dimension (overrides grid_counts)");
    sub->add_option("--seed", common.seed, "Seed for random control sampling and rollouts")
        ->each([&](const std::string&) { common.seed_given = true; });
    sub->add_option("--out-dir", common.out_dir, "Directory for artifacts")->capture_default_str();
    sub->add_option("--reuse-reachdict", common.reuse,
                    "Reach dict file: loaded if present, otherwise computed and saved there");
  };

  auto* run_cmd = app.add_subcommand("run", "Synthesize a controller for one strategy");
  add_common(run_cmd);
  std::string strategy;
  bool validate = false;
  std::size_t rollouts = 0;
  run_cmd->add_option("--strategy", strategy, "0, 0.5 or 1-6 (default: from config)");
  run_cmd->add_flag("--validate", validate, "Check the controller by simulation; non-zero exit on violations");
  run_cmd->add_option("--rollouts", rollouts, "Closed-loop rollouts to simulate and export as CSV");

  auto* cmp_cmd = app.add_subcommand("compare", "Run several strategies on one reach dict");
  add_common(cmp_cmd);
  std::string strategies = "0,0.5,1,2,3,4,5,6";
  cmp_cmd->add_option("--strategies", strategies, "Comma-separated strategy ids")->capture_default_str();

  auto* def_cmd = app.add_subcommand("default-config", "Print a built-in scenario as JSON");
  bool toy = false;
  bool corridor = false;
  def_cmd->add_flag("--toy", toy, "Small 5x5x4 scenario with a walled gap");
  def_cmd->add_flag("--corridor", corridor, "Obstacle-free periodic corridor");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return run(common, strategy, validate, rollouts);
    if (*cmp_cmd) return compare(common, strategies);
    if (*def_cmd) {
      const cli::Scenario s = toy ? cli::toy_scenario() : corridor ? cli::corridor_scenario() : cli::ship_scenario();
      std::cout << cli::to_json(s).dump(2) << '\n';
      return 0;
    }
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
