#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "evolution.hpp"
#include "genome_lsys.hpp"
#include "stats.hpp"
#include "svg.hpp"
#include "world.hpp"

namespace hebblsys {

inline constexpr double kDefaultCompetitiveFood = 2000.0;
inline constexpr const char* kStatsHeader = "generation,max_food,mean_food,best_ever,starved,mean_clicks";

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace detail

inline std::string stats_row(const GenerationStats& s) {
  return std::to_string(s.generation) + "," + std::to_string(s.max_food) + "," + detail::format_double(s.mean_food) + "," +
         std::to_string(s.best_ever) + "," + std::to_string(s.starved) + "," + detail::format_double(s.mean_clicks);
}

inline std::string stats_csv(const std::vector<GenerationStats>& series) {
  std::string out = std::string(kStatsHeader) + "\n";
  for (const auto& s : series) out += stats_row(s) + "\n";
  return out;
}

inline std::vector<GenerationStats> parse_stats_csv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines[0] != kStatsHeader) throw ParseError(1, "unexpected stats header");
  std::vector<GenerationStats> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> cells;
    std::stringstream ss{std::string(lines[i])};
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw ParseError(static_cast<int>(i) + 1, "expected 6 columns");
    try {
      GenerationStats s;
      s.generation = std::stoi(cells[0]);
      s.max_food = std::stoi(cells[1]);
      s.mean_food = std::stod(cells[2]);
      s.best_ever = std::stoi(cells[3]);
      s.starved = std::stoi(cells[4]);
      s.mean_clicks = std::stod(cells[5]);
      out.push_back(s);
    } catch (const std::exception&) {
      throw ParseError(static_cast<int>(i) + 1, "malformed number");
    }
  }
  return out;
}

/// Terrain for a run: the configured world file, or generated from the layout seed.
inline World make_world(const RunConfig& c, std::optional<WorldType> type_override = std::nullopt) {
  if (!c.world_file.empty() && !type_override) {
    try {
      return load_world(detail::read_file(c.world_file));
    } catch (const ParseError& e) {
      throw std::runtime_error(c.world_file + ": " + e.what());
    }
  }
  return generate_world(type_override.value_or(c.world_type), c.width, c.height, c.layout_seed);
}

inline svg::LineChart fitness_chart(const std::vector<GenerationStats>& series, const std::string& title) {
  svg::LineChart chart;
  chart.title = title;
  svg::Series max{"max food", {}}, mean{"mean food", {}};
  for (const auto& s : series) {
    max.points.emplace_back(s.generation, s.max_food);
    mean.points.emplace_back(s.generation, s.mean_food);
  }
  chart.series = {std::move(max), std::move(mean)};
  return chart;
}

struct RunResult {
  EvolutionResult evolution;
  std::filesystem::path out_dir;
};

/// Evolves one population and writes stats.csv, final.pop and fitness.svg
/// into `config.out_dir`. stats.csv is appended generation by generation, so
/// a failed run leaves the completed rows behind.
inline RunResult cmd_run(const RunConfig& config, int jobs = 1) {
  validate(config);
  const std::filesystem::path dir = config.out_dir;
  std::filesystem::create_directories(dir);
  const World world = make_world(config);

  std::ofstream csv(dir / "stats.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + (dir / "stats.csv").string());
  csv << kStatsHeader << "\n" << std::flush;

  EvolutionConfig evo{config.encoding, config.generations, config.ga, config.run_seed};
  RunResult result;
  result.out_dir = dir;
  result.evolution = run_evolution(evo, world, jobs, [&](const GenerationStats& s) { csv << stats_row(s) << "\n" << std::flush; });
  detail::write_file(dir / "final.pop", serialize_population(result.evolution.population, config.generations));
  detail::write_file(dir / "fitness.svg",
                     svg::render(fitness_chart(result.evolution.stats, to_string(config.encoding) + " on " + to_string(world.type))));
  return result;
}

/// First generation whose max_food strictly exceeds `threshold`.
inline std::optional<int> first_crossing(const std::vector<GenerationStats>& series, double threshold) {
  for (const auto& s : series)
    if (s.max_food > threshold) return s.generation;
  return std::nullopt;
}

struct ConditionSummary {
  Encoding encoding = Encoding::Lsys;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<GenerationStats>> runs;
  std::vector<double> final_max;
  std::vector<double> final_mean;
  std::vector<std::optional<int>> crossings;

  double mean_max() const { return stats::mean(final_max); }
  double sd_max() const { return stats::sample_sd(final_max); }
  double cv_max() const { return stats::cv(final_max); }
  double median_max() const { return stats::median(final_max); }
  double mean_mean() const { return stats::mean(final_mean); }
  double sd_mean() const { return stats::sample_sd(final_mean); }
  double cv_mean() const { return stats::cv(final_mean); }
};

struct ComparisonReport {
  std::vector<ConditionSummary> conditions;
  double threshold = kDefaultCompetitiveFood;

  const ConditionSummary* find(Encoding e) const {
    for (const auto& c : conditions)
      if (c.encoding == e) return &c;
    return nullptr;
  }
};

inline ConditionSummary summarize_condition(Encoding encoding, const std::vector<std::uint64_t>& seeds,
                                            std::vector<std::vector<GenerationStats>> runs, double threshold) {
  ConditionSummary c;
  c.encoding = encoding;
  c.seeds = seeds;
  c.runs = std::move(runs);
  for (const auto& run : c.runs) {
    c.final_max.push_back(run.empty() ? 0.0 : run.back().max_food);
    c.final_mean.push_back(run.empty() ? 0.0 : run.back().mean_food);
    c.crossings.push_back(first_crossing(run, threshold));
  }
  return c;
}

inline std::string summary_csv(const ComparisonReport& r) {
  std::string out =
      "encoding,runs,mean_max_food,sd_max_food,cv_max_food,median_max_food,mean_mean_food,sd_mean_food,cv_mean_food,runs_crossing\n";
  for (const auto& c : r.conditions) {
    std::size_t crossed = 0;
    for (const auto& x : c.crossings) crossed += x.has_value();
    out += to_string(c.encoding) + "," + std::to_string(c.runs.size()) + "," + detail::format_double(c.mean_max()) + "," +
           detail::format_double(c.sd_max()) + "," + detail::format_double(c.cv_max()) + "," +
           detail::format_double(c.median_max()) + "," + detail::format_double(c.mean_mean()) + "," +
           detail::format_double(c.sd_mean()) + "," + detail::format_double(c.cv_mean()) + "," + std::to_string(crossed) + "\n";
  }
  return out;
}

inline std::string runs_csv(const ComparisonReport& r) {
  std::string out = "encoding,seed,final_max_food,final_mean_food,first_crossing\n";
  for (const auto& c : r.conditions) {
    for (std::size_t i = 0; i < c.runs.size(); ++i) {
      out += to_string(c.encoding) + "," + std::to_string(c.seeds[i]) + "," + detail::format_double(c.final_max[i]) + "," +
             detail::format_double(c.final_mean[i]) + "," + (c.crossings[i] ? std::to_string(*c.crossings[i]) : "NA") + "\n";
    }
  }
  return out;
}

/// Per-generation mean over runs of max_food, one column per encoding.
inline std::string mean_max_csv(const ComparisonReport& r) {
  std::string out = "generation";
  std::size_t generations = 0;
  for (const auto& c : r.conditions) {
    out += "," + to_string(c.encoding);
    for (const auto& run : c.runs) generations = std::max(generations, run.size());
  }
  out += "\n";
  for (std::size_t g = 0; g < generations; ++g) {
    out += std::to_string(g + 1);
    for (const auto& c : r.conditions) {
      std::vector<double> vals;
      for (const auto& run : c.runs)
        if (g < run.size()) vals.push_back(run[g].max_food);
      out += "," + detail::format_double(stats::mean(vals));
    }
    out += "\n";
  }
  return out;
}

/// Runs every (encoding, seed) pair from `base` and writes per-run outputs to
/// <out>/<encoding>_seed<k>/, plus summary.csv, runs.csv, mean_max.csv,
/// mean_max.svg and traces.svg in <out>.
inline ComparisonReport cmd_compare(const RunConfig& base, const std::vector<Encoding>& encodings,
                                    const std::vector<std::uint64_t>& seeds, int jobs = 1,
                                    double threshold = kDefaultCompetitiveFood) {
  if (seeds.size() < 2) throw ConfigError("compare needs at least two seeds");
  if (encodings.empty()) throw ConfigError("compare needs at least one encoding");
  validate(base);
  const std::filesystem::path dir = base.out_dir;
  std::filesystem::create_directories(dir);

  ComparisonReport report;
  report.threshold = threshold;
  for (Encoding e : encodings) {
    std::vector<std::vector<GenerationStats>> runs;
    for (std::uint64_t seed : seeds) {
      RunConfig c = base;
      c.encoding = e;
      c.run_seed = seed;
      c.out_dir = (dir / (to_string(e) + "_seed" + std::to_string(seed))).string();
      runs.push_back(cmd_run(c, jobs).evolution.stats);
    }
    report.conditions.push_back(summarize_condition(e, seeds, std::move(runs), threshold));
  }

  detail::write_file(dir / "summary.csv", summary_csv(report));
  detail::write_file(dir / "runs.csv", runs_csv(report));
  detail::write_file(dir / "mean_max.csv", mean_max_csv(report));

  svg::LineChart means;
  means.title = "Mean maximum food per generation";
  svg::LineChart traces;
  traces.title = "Individual run traces (max food)";
  for (const auto& c : report.conditions) {
    svg::Series s{to_string(c.encoding), {}};
    std::size_t generations = 0;
    for (const auto& run : c.runs) generations = std::max(generations, run.size());
    for (std::size_t g = 0; g < generations; ++g) {
      std::vector<double> vals;
      for (const auto& run : c.runs)
        if (g < run.size()) vals.push_back(run[g].max_food);
      s.points.emplace_back(static_cast<double>(g + 1), stats::mean(vals));
    }
    means.series.push_back(std::move(s));
    for (std::size_t i = 0; i < c.runs.size(); ++i) {
      svg::Series t{to_string(c.encoding) + " seed " + std::to_string(c.seeds[i]), {}};
      for (const auto& st : c.runs[i]) t.points.emplace_back(st.generation, st.max_food);
      traces.series.push_back(std::move(t));
    }
  }
  detail::write_file(dir / "mean_max.svg", svg::render(means));
  detail::write_file(dir / "traces.svg", svg::render(traces));
  return report;
}

struct TransferOutcome {
  std::string source;
  Encoding encoding = Encoding::Lsys;
  std::vector<GenerationStats> stats;
};

inline std::string transfer_summary_csv(const std::vector<TransferOutcome>& outcomes) {
  std::string out = "population,encoding,first_max_food,first_mean_food,last_max_food,last_mean_food\n";
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    const GenerationStats first = o.stats.empty() ? GenerationStats{} : o.stats.front();
    const GenerationStats last = o.stats.empty() ? GenerationStats{} : o.stats.back();
    out += std::to_string(i) + "," + to_string(o.encoding) + "," + std::to_string(first.max_food) + "," +
           detail::format_double(first.mean_food) + "," + std::to_string(last.max_food) + "," +
           detail::format_double(last.mean_food) + "\n";
  }
  return out;
}

/// Continues each snapshot's population in a new world type. Writes
/// <out>/transfer_<i>/stats.csv, <out>/transfer_summary.csv and <out>/transfer.svg.
inline std::vector<TransferOutcome> cmd_transfer(const std::vector<std::string>& snapshot_paths, const RunConfig& base,
                                                 WorldType new_world, int generations, std::uint64_t seed, int jobs = 1) {
  if (snapshot_paths.empty()) throw ConfigError("transfer needs at least one snapshot");
  validate(base);
  std::vector<Population> populations;
  for (const auto& path : snapshot_paths) {
    try {
      populations.push_back(parse_population(detail::read_file(path)).population);
    } catch (const ParseError& e) {
      throw std::runtime_error(path + ": " + e.what());
    }
  }
  for (const auto& p : populations)
    if (p.neurons() != populations.front().neurons()) throw std::runtime_error("incompatible n across snapshots");

  RunConfig world_cfg = base;
  world_cfg.world_file.clear();
  const World world = make_world(world_cfg, new_world);
  GaParams ga = base.ga;
  ga.neurons = populations.front().neurons();

  const std::filesystem::path dir = base.out_dir;
  std::filesystem::create_directories(dir);
  std::vector<TransferOutcome> outcomes;
  svg::LineChart chart;
  chart.title = "Transfer to " + to_string(new_world) + " (max food)";
  for (std::size_t i = 0; i < populations.size(); ++i) {
    TransferOutcome o;
    o.source = snapshot_paths[i];
    o.encoding = populations[i].encoding;
    o.stats = transfer_run(populations[i], world, generations, ga, seed, jobs).stats;
    const auto sub = dir / ("transfer_" + std::to_string(i));
    std::filesystem::create_directories(sub);
    detail::write_file(sub / "stats.csv", stats_csv(o.stats));
    svg::Series s{to_string(o.encoding) + " #" + std::to_string(i), {}};
    for (const auto& st : o.stats) s.points.emplace_back(st.generation, st.max_food);
    chart.series.push_back(std::move(s));
    outcomes.push_back(std::move(o));
  }
  detail::write_file(dir / "transfer_summary.csv", transfer_summary_csv(outcomes));
  detail::write_file(dir / "transfer.svg", svg::render(chart));
  return outcomes;
}

struct BaselineReport {
  std::vector<LifeResult> lives;
  double mean = 0.0;
  double sd = 0.0;
  int max = 0;
};

/// Random-movement animats; life i uses the streams for (seed, 0, i).
inline BaselineReport cmd_baseline(const World& world, const LifeParams& life, int lives, std::uint64_t seed) {
  if (lives < 1) throw ConfigError("baseline needs at least one life");
  BaselineReport r;
  std::vector<double> food;
  for (int i = 0; i < lives; ++i) {
    LifeStreams streams = life_streams(seed, 0, static_cast<std::uint64_t>(i));
    r.lives.push_back(random_policy_life(world, life, streams));
    food.push_back(r.lives.back().fitness);
    r.max = std::max(r.max, r.lives.back().fitness);
  }
  r.mean = stats::mean(food);
  r.sd = stats::sample_sd(food);
  return r;
}

struct ScalingRow {
  int n = 0;
  std::uint64_t lsys_genes = 0;
  std::uint64_t matrix_genes = 0;
  double ratio = 0.0;  // matrix / lsys
};

struct ScalingTables {
  std::vector<ScalingRow> genotype;
  std::vector<ProofSystemStats> proof;
};

inline ScalingTables cmd_scaling(const std::vector<int>& n_list, int proof_levels = 8) {
  ScalingTables t;
  for (int n : n_list) {
    if (n < kMinNeurons || !is_power_of_two(n)) throw ConfigError("scaling: n must be a power of two >= 32, got " + std::to_string(n));
    ScalingRow row;
    row.n = n;
    row.lsys_genes = static_cast<std::uint64_t>(genotype_gene_count(n));
    row.matrix_genes = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
    row.ratio = static_cast<double>(row.matrix_genes) / static_cast<double>(row.lsys_genes);
    t.genotype.push_back(row);
  }
  for (int i = 1; i <= proof_levels; ++i) t.proof.push_back(ls_proof_stats(i));
  return t;
}

inline std::string scaling_csv(const ScalingTables& t) {
  std::string out = "n,lsys_gene_count,matrix_gene_count,ratio\n";
  for (const auto& r : t.genotype)
    out += std::to_string(r.n) + "," + std::to_string(r.lsys_genes) + "," + std::to_string(r.matrix_genes) + "," +
           detail::format_double(r.ratio) + "\n";
  return out;
}

inline std::string proof_csv(const ScalingTables& t) {
  std::string out = "i,S,T,N\n";
  for (const auto& p : t.proof)
    out += std::to_string(p.i) + "," + std::to_string(p.symbols) + "," + std::to_string(p.terminals) + "," +
           std::to_string(p.neurons) + "\n";
  return out;
}

}  // namespace hebblsys
