#ifndef SYMSYNTH_SYNTHESIS_REPORT_HPP
#define SYMSYNTH_SYNTHESIS_REPORT_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "symsynth/synthesis/synthesize.hpp"

namespace symsynth::synthesis {

inline constexpr int kMetricsSchemaVersion = 1;

/// Cell-to-control map, the synthesized output.
struct Controller {
  std::uint64_t grid_hash = 0;
  double tau = 0.0;
  std::vector<std::int32_t> assignment;  // kNoControl where undefined

  [[nodiscard]] std::optional<ControlId> at(CellId c) const {
    const std::int32_t a = assignment.at(c);
    if (a < 0) return std::nullopt;
    return static_cast<ControlId>(a);
  }
};

[[nodiscard]] inline nlohmann::json to_json(const Controller& k) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t c = 0; c < k.assignment.size(); ++c) {
    if (k.assignment[c] >= 0) entries.push_back({c, k.assignment[c]});
  }
  return {{"grid_hash", k.grid_hash},
          {"tau", k.tau},
          {"cells", k.assignment.size()},
          {"entries", entries}};
}

[[nodiscard]] inline Controller controller_from_json(const nlohmann::json& j) {
  Controller k;
  k.grid_hash = j.at("grid_hash").get<std::uint64_t>();
  k.tau = j.at("tau").get<double>();
  k.assignment.assign(j.at("cells").get<std::size_t>(), kNoControl);
  for (const auto& e : j.at("entries")) {
    k.assignment.at(e.at(0).get<std::size_t>()) = e.at(1).get<std::int32_t>();
  }
  return k;
}

struct CacheStats {
  std::size_t min = 0;
  double avg = 0.0;
  double median = 0.0;
  std::size_t max = 0;
};

/// List-length statistics over the (section, control) states of a cache.
[[nodiscard]] inline std::optional<CacheStats> cache_stats(const Cache& cache) {
  std::vector<std::size_t> lens;
  for (const auto& [s, list] : cache.entries()) {
    if (s.is_pair()) lens.push_back(list.size());
  }
  if (lens.empty()) return std::nullopt;
  std::sort(lens.begin(), lens.end());
  CacheStats st;
  st.min = lens.front();
  st.max = lens.back();
  double sum = 0.0;
  for (auto l : lens) sum += static_cast<double>(l);
  st.avg = sum / static_cast<double>(lens.size());
  const std::size_t n = lens.size();
  st.median = n % 2 ? static_cast<double>(lens[n / 2])
                    : 0.5 * static_cast<double>(lens[n / 2 - 1] + lens[n / 2]);
  return st;
}

/// One row of the strategy comparison table.
struct Metrics {
  std::string strategy;
  std::string qx_counts;
  std::size_t n_grid_star = 0;
  std::optional<std::size_t> n_sym;
  std::optional<std::size_t> n_cao;
  std::size_t n_ctr = 0;
  std::optional<CacheStats> cache;
  double explored_frac = 0.0;
  double path_avg = 0.0;
  std::size_t path_max = 0;
  std::optional<double> abstraction_s;
  double synthesis_s = 0.0;
  double total_s = 0.0;
};

/// Worst-case number of transitions from each controlled cell to a reach
/// cell: one more than the longest path among the cells its end box meets.
[[nodiscard]] inline std::vector<std::uint32_t> path_lengths(const TransitionOracle& oracle,
                                                             const SynthesisResult& r) {
  std::vector<std::uint32_t> len(r.in_r.size(), 0);
  for (CellId c : r.order) {
    std::uint32_t worst = 0;
    const auto a = static_cast<ControlId>(r.controller[c]);
    (void)oracle.grid().visit_cells(oracle.box(c, a, oracle.segments()), [&](CellId n) {
      worst = std::max(worst, len[n]);
      return true;
    });
    len[c] = worst + 1;
  }
  return len;
}

inline void fill_result_metrics(Metrics& m, const SynthesisResult& r, const TransitionOracle& oracle) {
  m.n_ctr = r.controlled();
  m.explored_frac = r.explored_frac;
  const auto len = path_lengths(oracle, r);
  std::size_t sum = 0;
  m.path_max = 0;
  for (CellId c : r.order) {
    sum += len[c];
    m.path_max = std::max<std::size_t>(m.path_max, len[c]);
  }
  m.path_avg = r.order.empty() ? 0.0 : static_cast<double>(sum) / static_cast<double>(r.order.size());
  if (r.cache) m.cache = cache_stats(*r.cache);
}

[[nodiscard]] inline std::string metrics_header() {
  return "strategy,qx_counts,n_grid_star,n_sym,n_cao,n_ctr,cache_min,cache_avg,cache_median,"
         "cache_max,explored_frac,path_avg,path_max,abstraction_s,synthesis_s,total_s";
}

[[nodiscard]] inline std::string metrics_row(const Metrics& m) {
  std::ostringstream os;
  os << std::setprecision(6);
  auto opt = [&os](const auto& v) {
    if (v) os << *v;
    os << ',';
  };
  os << m.strategy << ',' << m.qx_counts << ',' << m.n_grid_star << ',';
  opt(m.n_sym);
  opt(m.n_cao);
  os << m.n_ctr << ',';
  if (m.cache) {
    os << m.cache->min << ',' << m.cache->avg << ',' << m.cache->median << ',' << m.cache->max
       << ',';
  } else {
    os << ",,,,";
  }
  os << m.explored_frac << ',' << m.path_avg << ',' << m.path_max << ',';
  opt(m.abstraction_s);
  os << m.synthesis_s << ',' << m.total_s;
  return os.str();
}

inline void write_metrics_csv(const std::string& path, const std::vector<Metrics>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << metrics_header() << '\n';
  for (const auto& m : rows) out << metrics_row(m) << '\n';
  std::ofstream meta(path + ".json");
  meta << nlohmann::json{{"schema_version", kMetricsSchemaVersion}, {"columns", metrics_header()}}
              .dump(2)
       << '\n';
}

}  // namespace symsynth::synthesis

#endif  // SYMSYNTH_SYNTHESIS_REPORT_HPP
