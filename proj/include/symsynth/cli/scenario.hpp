#ifndef SYMSYNTH_CLI_SCENARIO_HPP
#define SYMSYNTH_CLI_SCENARIO_HPP

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "symsynth/abstraction/classify.hpp"
#include "symsynth/abstraction/grid.hpp"
#include "symsynth/abstraction/relative.hpp"
#include "symsynth/abstraction/sym_abstraction.hpp"
#include "symsynth/geometry/box.hpp"
#include "symsynth/reach/reach_dict.hpp"
#include "symsynth/symmetry/se2.hpp"
#include "symsynth/synthesis/report.hpp"
#include "symsynth/synthesis/strategy.hpp"
#include "symsynth/synthesis/synthesize.hpp"
#include "symsynth/synthesis/transition.hpp"
#include "symsynth/validation/simulate.hpp"

namespace symsynth::cli {

using geometry::Box;
using geometry::kPi;
using geometry::Vec3;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Scenario {
  std::string name = "ship";
  Box<3> state_box;
  std::array<bool, 3> periodic{false, false, true};
  std::array<std::size_t, 3> grid_counts{30, 30, 30};
  Box<3> input_box;
  std::array<std::size_t, 3> control_counts{9, 9, 9};
  Box<3> disturbance_box;           // W, used by the simulator
  Box<3> relative_disturbance_box;  // must cover W seen from every frame; used for tubes
  Box<3> reach_box;
  std::vector<Box<3>> avoid_boxes;
  double tau = 3.0;
  std::size_t substeps = 4;
  std::size_t integration_steps = 512;
  std::string strategy = "5";
  std::optional<std::size_t> m;  // obstructed-control threshold; defaults to the strategy budget
  std::uint64_t seed = 1;
};

/// Ship in the harbour: the default scenario.
[[nodiscard]] inline Scenario ship_scenario(std::size_t resolution = 30) {
  Scenario s;
  s.name = "ship";
  s.state_box = Box<3>({-3.0, -3.0, -kPi}, {13.0, 9.5, kPi});
  s.grid_counts = {resolution, resolution, resolution};
  s.input_box = Box<3>({-0.18, -0.05, -0.1}, {0.18, 0.05, 0.1});
  const double w = 0.01 / std::sqrt(2.0);
  s.disturbance_box = Box<3>({-w, -w, -w}, {w, w, w});
  s.relative_disturbance_box = Box<3>({-0.01, -0.01, -0.01}, {0.01, 0.01, 0.01});
  s.reach_box = Box<3>({7.0, 0.0, kPi / 3.0}, {10.0, 6.5, 2.0 * kPi / 3.0});
  s.avoid_boxes = {
      Box<3>({2.0, -3.0, -kPi}, {2.5, 3.0, kPi}),   Box<3>({5.0, 3.5, -kPi}, {5.5, 9.5, kPi}),
      Box<3>({-3.0, -3.0, -kPi}, {0.0, 9.5, kPi}),  Box<3>({-3.0, -3.0, -kPi}, {13.0, 0.0, kPi}),
      Box<3>({-3.0, 6.5, -kPi}, {13.0, 9.5, kPi}),  Box<3>({10.0, -3.0, -kPi}, {13.0, 9.5, kPi}),
  };
  return s;
}

/// 5x5x4 grid over a narrow heading range, wrapping around in north and east.
/// A wall in the middle row blocks one column and leaves the rest open; the
/// top two rows are the target.
[[nodiscard]] inline Scenario toy_scenario() {
  Scenario s;
  s.name = "toy";
  s.state_box = Box<3>({0.0, 0.0, -0.2}, {5.0, 5.0, 0.2});
  s.periodic = {true, true, false};
  s.grid_counts = {5, 5, 4};
  s.input_box = Box<3>({0.0, -0.2, -0.05}, {1.2, 0.2, 0.05});
  s.control_counts = {5, 5, 5};
  s.disturbance_box = Box<3>({-0.01, -0.01, -0.005}, {0.01, 0.01, 0.005});
  s.relative_disturbance_box = Box<3>({-0.015, -0.015, -0.005}, {0.015, 0.015, 0.005});
  s.reach_box = Box<3>({3.0, 0.0, -0.2}, {5.0, 5.0, 0.2});
  s.avoid_boxes = {Box<3>({2.4, 0.0, -0.2}, {2.6, 0.9, 0.2})};
  s.tau = 1.5;
  s.strategy = "1";
  return s;
}

/// Obstacle-free corridor, one cell wide and wrapping around in north and
/// east, so no tube can leave the state box. Every control moves more than a
/// cell north and the straight one is always nearest to the target.
[[nodiscard]] inline Scenario corridor_scenario() {
  Scenario s;
  s.name = "corridor";
  s.state_box = Box<3>({0.0, -1.5, -0.01}, {10.0, 1.5, 0.01});
  s.periodic = {true, true, false};
  s.grid_counts = {20, 1, 1};
  s.input_box = Box<3>({0.15, -0.03, -0.001}, {0.25, 0.03, 0.001});
  s.control_counts = {1, 3, 1};
  s.disturbance_box = Box<3>({-1e-3, -1e-3, 0.0}, {1e-3, 1e-3, 0.0});
  s.relative_disturbance_box = Box<3>({-1.5e-3, -1.5e-3, 0.0}, {1.5e-3, 1.5e-3, 0.0});
  s.reach_box = Box<3>({9.0, -1.5, -0.01}, {10.0, 1.5, 0.01});
  s.strategy = "1";
  return s;
}

// ---------------------------------------------------------------------------
// JSON configuration

namespace detail {

/// Number, or a multiple of pi written "pi:<a>" or "pi:<a>/<b>".
[[nodiscard]] inline double parse_real(const nlohmann::json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw ConfigError(field + ": expected a number or \"pi:<a>/<b>\"");
  const auto text = j.get<std::string>();
  if (text.rfind("pi:", 0) != 0) throw ConfigError(field + ": expected \"pi:<a>/<b>\", got " + text);
  const std::string frac = text.substr(3);
  try {
    std::size_t used = 0;
    const auto slash = frac.find('/');
    const double num = std::stod(frac.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? frac.size() : slash)) throw std::invalid_argument("");
    double den = 1.0;
    if (slash != std::string::npos) {
      const std::string d = frac.substr(slash + 1);
      den = std::stod(d, &used);
      if (used != d.size() || den == 0.0) throw std::invalid_argument("");
    }
    return num * kPi / den;
  } catch (const std::exception&) {
    throw ConfigError(field + ": malformed angle " + text);
  }
}

[[nodiscard]] inline Vec3 parse_vec3(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(field + ": expected 3 values");
  Vec3 v{};
  for (std::size_t i = 0; i < 3; ++i) {
    v[i] = parse_real(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

[[nodiscard]] inline Box<3> parse_box(const nlohmann::json& j, const std::string& field) {
  if (!j.is_object() || !j.contains("lower") || !j.contains("upper")) {
    throw ConfigError(field + ": expected {\"lower\": [...], \"upper\": [...]}");
  }
  const Vec3 lo = parse_vec3(j.at("lower"), field + ".lower");
  const Vec3 hi = parse_vec3(j.at("upper"), field + ".upper");
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(lo[i] <= hi[i])) {
      throw ConfigError(field + ": lower[" + std::to_string(i) + "] exceeds upper[" +
                        std::to_string(i) + "]");
    }
  }
  return Box<3>(lo, hi);
}

[[nodiscard]] inline std::array<std::size_t, 3> parse_counts(const nlohmann::json& j,
                                                             const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(field + ": expected 3 counts");
  std::array<std::size_t, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() < 1) {
      throw ConfigError(field + "[" + std::to_string(i) + "]: expected a positive integer");
    }
    out[i] = j[i].get<std::size_t>();
  }
  return out;
}

[[nodiscard]] inline nlohmann::json box_json(const Box<3>& b) {
  return {{"lower", b.lower}, {"upper", b.upper}};
}

}  // namespace detail

/// Checks the cross-field constraints; throws ConfigError naming the field.
inline void validate(const Scenario& s) {
  if (!(s.tau > 0.0)) throw ConfigError("tau: must be positive");
  if (s.substeps == 0) throw ConfigError("substeps: must be at least 1");
  if (s.integration_steps == 0 || s.integration_steps % s.substeps != 0) {
    throw ConfigError("integration_steps: must be a positive multiple of substeps");
  }
  for (std::size_t d = 0; d < 3; ++d) {
    if (!(s.state_box.upper[d] > s.state_box.lower[d])) {
      throw ConfigError("state_box: empty extent in dimension " + std::to_string(d));
    }
    if (!(s.input_box.upper[d] > s.input_box.lower[d])) {
      throw ConfigError("input_box: empty extent in dimension " + std::to_string(d));
    }
  }
  if (!s.relative_disturbance_box.contains(
          symmetry::disturbance_over_all_frames(s.disturbance_box))) {
    throw ConfigError(
        "relative_disturbance_box: does not contain the disturbance box seen from every heading");
  }
  try {
    (void)synthesis::strategy(s.strategy);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("strategy: ") + e.what());
  }
  const std::size_t controls = s.control_counts[0] * s.control_counts[1] * s.control_counts[2];
  if (s.m && (*s.m == 0 || *s.m > controls)) {
    throw ConfigError("M: must lie in [1, " + std::to_string(controls) + "]");
  }
}

[[nodiscard]] inline Scenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  Scenario s;
  auto req = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ConfigError(std::string(key) + ": missing");
    return j.at(key);
  };
  s.name = j.value("name", std::string("scenario"));
  s.state_box = detail::parse_box(req("state_box"), "state_box");
  if (j.contains("periodic")) {
    const auto& p = j.at("periodic");
    if (!p.is_array() || p.size() != 3) throw ConfigError("periodic: expected 3 booleans");
    for (std::size_t i = 0; i < 3; ++i) {
      if (!p[i].is_boolean()) throw ConfigError("periodic[" + std::to_string(i) + "]: expected a boolean");
      s.periodic[i] = p[i].get<bool>();
    }
  }
  s.grid_counts = detail::parse_counts(req("grid_counts"), "grid_counts");
  s.input_box = detail::parse_box(req("input_box"), "input_box");
  s.control_counts = detail::parse_counts(req("control_counts"), "control_counts");
  s.disturbance_box = detail::parse_box(req("disturbance_box"), "disturbance_box");
  s.relative_disturbance_box =
      j.contains("relative_disturbance_box")
          ? detail::parse_box(j.at("relative_disturbance_box"), "relative_disturbance_box")
          : symmetry::disturbance_over_all_frames(s.disturbance_box);
  s.reach_box = detail::parse_box(req("reach_box"), "reach_box");
  const auto& avoid = req("avoid_boxes");
  if (!avoid.is_array()) throw ConfigError("avoid_boxes: expected a list");
  for (std::size_t i = 0; i < avoid.size(); ++i) {
    s.avoid_boxes.push_back(detail::parse_box(avoid[i], "avoid_boxes[" + std::to_string(i) + "]"));
  }
  auto number = [&](const char* key, double fallback) {
    return j.contains(key) ? detail::parse_real(j.at(key), key) : fallback;
  };
  auto count = [&](const char* key, std::size_t fallback) -> std::size_t {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < 0) {
      throw ConfigError(std::string(key) + ": expected a non-negative integer");
    }
    return j.at(key).get<std::size_t>();
  };
  s.tau = number("tau", s.tau);
  s.substeps = count("substeps", s.substeps);
  s.integration_steps = count("integration_steps", s.integration_steps);
  if (j.contains("strategy")) {
    const auto& st = j.at("strategy");
    s.strategy = st.is_string() ? st.get<std::string>() : st.dump();
  }
  if (j.contains("M") && !j.at("M").is_null()) s.m = count("M", 0);
  s.seed = count("seed", s.seed);
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

[[nodiscard]] inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return scenario_from_json(j);
}

[[nodiscard]] inline nlohmann::json to_json(const Scenario& s) {
  nlohmann::json avoid = nlohmann::json::array();
  for (const auto& a : s.avoid_boxes) avoid.push_back(detail::box_json(a));
  nlohmann::json j = {{"name", s.name},
                      {"state_box", detail::box_json(s.state_box)},
                      {"periodic", s.periodic},
                      {"grid_counts", s.grid_counts},
                      {"input_box", detail::box_json(s.input_box)},
                      {"control_counts", s.control_counts},
                      {"disturbance_box", detail::box_json(s.disturbance_box)},
                      {"relative_disturbance_box", detail::box_json(s.relative_disturbance_box)},
                      {"reach_box", detail::box_json(s.reach_box)},
                      {"avoid_boxes", avoid},
                      {"tau", s.tau},
                      {"substeps", s.substeps},
                      {"integration_steps", s.integration_steps},
                      {"strategy", s.strategy},
                      {"seed", s.seed}};
  j["M"] = s.m ? nlohmann::json(*s.m) : nlohmann::json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// Pipeline

using Clock = std::chrono::steady_clock;

[[nodiscard]] inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Everything shared by the strategies of one scenario.
struct Prepared {
  Scenario scenario;
  abstraction::Scene scene;
  abstraction::Classification cls;
  reach::ReachDict rd;
  std::optional<synthesis::TransitionOracle> oracle;
  double reach_dict_s = 0.0;
  bool reach_dict_loaded = false;
};

[[nodiscard]] inline abstraction::Scene make_scene(const Scenario& s) {
  return {abstraction::StateGrid(s.state_box, s.grid_counts, s.periodic), s.reach_box,
          s.avoid_boxes};
}

[[nodiscard]] inline reach::ReachDictParams reach_params(const Scenario& s) {
  return {s.relative_disturbance_box, s.tau, s.substeps, s.integration_steps};
}

/// Builds the grid, classifies it and computes (or loads) the reach dict.
[[nodiscard]] inline Prepared prepare(const Scenario& s,
                                      const std::optional<std::string>& reuse_reach_dict = {}) {
  validate(s);
  Prepared p;
  p.scenario = s;
  p.scene = make_scene(s);
  p.cls = abstraction::classify_all(p.scene);
  const abstraction::ControlGrid controls(s.input_box, s.control_counts);
  const auto t0 = Clock::now();
  if (reuse_reach_dict && std::filesystem::exists(*reuse_reach_dict)) {
    p.rd = reach::load_reach_dict(*reuse_reach_dict);
    if (p.rd.state_grid_hash() != p.scene.grid.hash() || !(p.rd.control_grid() == controls) ||
        !(p.rd.params() == reach_params(s))) {
      throw ConfigError("--reuse-reachdict: " + *reuse_reach_dict +
                        " was built for a different grid or model");
    }
    p.reach_dict_loaded = true;
  } else {
    p.rd = reach::build_reach_dict(controls, p.scene.grid, reach_params(s));
    if (reuse_reach_dict) reach::save_reach_dict(p.rd, *reuse_reach_dict);
  }
  p.reach_dict_s = seconds_since(t0);
  p.oracle.emplace(p.scene.grid, p.rd);
  return p;
}

struct RunOutcome {
  synthesis::StrategyConfig strategy;
  synthesis::SynthesisResult result;
  std::optional<abstraction::SymAbstraction> sym;
  synthesis::Controller controller;
  synthesis::Metrics metrics;
};

/// Runs one strategy on a prepared scenario. The abstraction time covers the
/// relative states and the symmetry-based abstraction; the reach dict is
/// shared and not counted.
[[nodiscard]] inline RunOutcome run_strategy(const Prepared& p, const std::string& id,
                                             std::uint64_t seed,
                                             std::optional<std::size_t> m = {}) {
  RunOutcome out;
  out.strategy = synthesis::strategy(id);
  const auto& cfg = out.strategy;
  auto& met = out.metrics;
  met.strategy = id;
  met.qx_counts = p.scene.grid.describe();
  met.n_grid_star = p.cls.normal;
  if (!cfg.use_cache) {
    const auto t0 = Clock::now();
    out.result = synthesis::synth_baseline(*p.oracle, p.cls, cfg, seed);
    met.synthesis_s = seconds_since(t0);
    met.total_s = met.synthesis_s;
  } else {
    const std::size_t budget = cfg.budget_for(p.rd.controls());
    const auto t0 = Clock::now();
    const auto rels = abstraction::build_rel_states(p.scene);
    out.sym = abstraction::build_sym_abstraction(rels, p.cls, p.rd, m.value_or(budget),
                                                 cfg.abstraction_ordering(),
                                                 {cfg.batch_start, cfg.batch_factor});
    met.abstraction_s = seconds_since(t0);
    const auto t1 = Clock::now();
    out.result = synthesis::synth_symmetry(*p.oracle, p.cls, rels, *out.sym, p.rd, cfg, seed);
    met.synthesis_s = seconds_since(t1);
    met.total_s = *met.abstraction_s + met.synthesis_s;
    met.n_sym = out.sym->pair_count();
    met.n_cao = out.sym->cao;
  }
  synthesis::fill_result_metrics(met, out.result, *p.oracle);
  out.controller = {p.scene.grid.hash(), p.scenario.tau, out.result.controller};
  return out;
}

struct RolloutSummary {
  std::size_t total = 0;
  std::map<std::string, std::size_t> verdicts;
  std::vector<validation::Rollout> rollouts;

  [[nodiscard]] std::size_t count(validation::Verdict v) const {
    const auto it = verdicts.find(validation::to_string(v));
    return it == verdicts.end() ? 0 : it->second;
  }
};

/// Closed-loop rollouts from uniformly drawn states of uniformly drawn
/// controlled cells.
[[nodiscard]] inline RolloutSummary run_rollouts(const Prepared& p,
                                                 const synthesis::Controller& k, std::size_t n,
                                                 std::uint64_t seed, bool keep = false) {
  RolloutSummary out;
  std::vector<abstraction::CellId> cells;
  for (std::size_t c = 0; c < k.assignment.size(); ++c) {
    if (k.assignment[c] >= 0) cells.push_back(static_cast<abstraction::CellId>(c));
  }
  if (cells.empty()) return out;
  const auto& counts = p.scene.grid.counts();
  const std::size_t max_periods = 3 * (counts[0] + counts[1] + counts[2]);
  validation::SimulationSetup setup{&p.scene, &p.cls, &p.rd, p.scenario.disturbance_box};
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cell = cells[std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng)];
    const Box<3> b = p.scene.grid.cell_box(cell);
    Vec3 x{};
    for (std::size_t d = 0; d < 3; ++d) {
      x[d] = std::uniform_real_distribution<double>(b.lower[d], b.upper[d])(rng);
    }
    // A draw on the upper face belongs to the next cell.
    if (p.scene.grid.cell_of(x) != std::optional<abstraction::CellId>(cell)) x = b.center();
    auto r = validation::simulate(setup, k, x, rng(), max_periods);
    ++out.total;
    ++out.verdicts[validation::to_string(r.verdict)];
    if (keep) out.rollouts.push_back(std::move(r));
  }
  return out;
}

struct Comparison {
  std::vector<RunOutcome> runs;
  bool equivalent = true;
  std::vector<std::string> messages;
  std::map<std::string, double> speedup;  // baseline total time / strategy total time
};

[[nodiscard]] inline bool is_exhaustive(const std::string& id) {
  return id == "0" || id == "1" || id == "3" || id == "4" || id == "6";
}

/// Runs every strategy on one prepared scenario and checks that exhaustive
/// strategies agree on the controlled set and budget strategies stay inside it.
[[nodiscard]] inline Comparison compare_strategies(const Prepared& p,
                                                   const std::vector<std::string>& ids,
                                                   std::uint64_t seed) {
  Comparison cmp;
  for (const auto& id : ids) cmp.runs.push_back(run_strategy(p, id, seed, p.scenario.m));
  std::optional<std::vector<abstraction::CellId>> reference;
  std::string reference_id;
  for (const auto& r : cmp.runs) {
    if (!is_exhaustive(r.metrics.strategy)) continue;
    const auto cells = r.result.controlled_cells();
    if (!reference) {
      reference = cells;
      reference_id = r.metrics.strategy;
    } else if (cells != *reference) {
      cmp.equivalent = false;
      cmp.messages.push_back("strategy " + r.metrics.strategy + " controls " +
                             std::to_string(cells.size()) + " cells, strategy " + reference_id +
                             " controls " + std::to_string(reference->size()));
    }
  }
  if (reference) {
    for (const auto& r : cmp.runs) {
      if (is_exhaustive(r.metrics.strategy)) continue;
      const auto cells = r.result.controlled_cells();
      if (!std::includes(reference->begin(), reference->end(), cells.begin(), cells.end())) {
        cmp.equivalent = false;
        cmp.messages.push_back("strategy " + r.metrics.strategy +
                               " controls cells outside the exhaustive set");
      }
    }
  }
  const auto base = std::find_if(cmp.runs.begin(), cmp.runs.end(),
                                 [](const RunOutcome& r) { return r.metrics.strategy == "0"; });
  if (base != cmp.runs.end()) {
    for (const auto& r : cmp.runs) {
      if (r.metrics.total_s > 0.0) {
        cmp.speedup[r.metrics.strategy] = base->metrics.total_s / r.metrics.total_s;
      }
    }
  }
  return cmp;
}

/// Writes the controller, abstraction and metrics of a run into `dir`.
inline void write_run_artifacts(const std::filesystem::path& dir, const Prepared& p,
                                const RunOutcome& run) {
  std::filesystem::create_directories(dir);
  const std::string tag = run.metrics.strategy;
  {
    std::ofstream out(dir / ("controller_" + tag + ".json"));
    out << synthesis::to_json(run.controller).dump() << '\n';
  }
  if (run.sym) {
    std::ofstream out(dir / ("abstraction_" + tag + ".json"));
    out << abstraction::to_json(*run.sym, p.scene.grid.hash()).dump() << '\n';
  }
}

}  // namespace symsynth::cli

#endif  // SYMSYNTH_CLI_SCENARIO_HPP
