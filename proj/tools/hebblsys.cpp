// Command-line front end: run, compare, transfer, baseline, scaling.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hebblsys/harness.hpp"

namespace {

using namespace hebblsys;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  int jobs = 1;
  double threshold = kDefaultCompetitiveFood;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "key = value run configuration");
  cmd->add_option("--seed", o.seed, "run seed (overrides run_seed)");
  cmd->add_option("--out", o.out, "output directory (overrides out_dir)");
  cmd->add_option("--jobs", o.jobs, "worker threads for animat lives")->check(CLI::PositiveNumber);
  cmd->add_option("--threshold", o.threshold, "competitive food threshold");
}

RunConfig resolve_config(const CommonOptions& o) {
  RunConfig c;
  if (!o.config_path.empty()) {
    std::string text;
    try {
      text = detail::read_file(o.config_path);
    } catch (const std::runtime_error& e) {
      throw ConfigError(e.what());
    }
    c = load_config(text);
  }
  if (o.seed) c.run_seed = *o.seed;
  if (!o.out.empty()) c.out_dir = o.out;
  validate(c);
  return c;
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& text, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(parse(item));
    } catch (const std::exception&) {
      throw ConfigError("bad list item '" + item + "'");
    }
  }
  return out;
}

void print_summary(const ComparisonReport& report) {
  std::printf("%-10s %5s %12s %12s %8s %12s\n", "encoding", "runs", "mean_max", "sd_max", "cv", "mean_mean");
  for (const auto& c : report.conditions)
    std::printf("%-10s %5zu %12.1f %12.1f %7.1f%% %12.1f\n", to_string(c.encoding).c_str(), c.runs.size(), c.mean_max(),
                c.sd_max(), 100.0 * c.cv_max(), c.mean_mean());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hebbian animat neuroevolution workbench"};
  app.require_subcommand(1);

  CommonOptions run_opts, cmp_opts, xfer_opts, base_opts, scale_opts;

  auto* run = app.add_subcommand("run", "evolve one population");
  add_common(run, run_opts);

  auto* compare = app.add_subcommand("compare", "evolve every encoding over a set of seeds");
  add_common(compare, cmp_opts);
  std::string encodings_arg = "Lsys,MatrixLSG,Matrix";
  std::string seeds_arg = "1,2,3,4,5";
  compare->add_option("--encodings", encodings_arg, "comma-separated encodings");
  compare->add_option("--seeds", seeds_arg, "comma-separated run seeds");

  auto* transfer = app.add_subcommand("transfer", "continue saved populations in another world");
  add_common(transfer, xfer_opts);
  std::vector<std::string> snapshots;
  std::string transfer_world = "Maze";
  int transfer_generations = 100;
  transfer->add_option("--snapshot", snapshots, "population snapshot file (repeatable)")->required();
  transfer->add_option("--world", transfer_world, "Open | RoundedBarrier1 | Maze");
  transfer->add_option("--generations", transfer_generations, "generations in the new world");

  auto* baseline = app.add_subcommand("baseline", "random-movement animats");
  add_common(baseline, base_opts);
  std::string baseline_world;
  int lives = 200;
  baseline->add_option("--world", baseline_world, "world type (default: config world_type)");
  baseline->add_option("--lives", lives, "number of lives");

  auto* scaling = app.add_subcommand("scaling", "genotype size tables");
  add_common(scaling, scale_opts);
  std::string n_arg = "32,64,128,256,512,1024,2048,4096";
  scaling->add_option("--n", n_arg, "comma-separated neuron counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const RunConfig c = resolve_config(run_opts);
      const auto result = cmd_run(c, run_opts.jobs);
      const auto& last = result.evolution.stats;
      if (!last.empty())
        std::printf("generation %d: max_food %d mean_food %.1f best_ever %d\n", last.back().generation, last.back().max_food,
                    last.back().mean_food, last.back().best_ever);
      std::printf("wrote %s\n", result.out_dir.string().c_str());
    } else if (*compare) {
      const RunConfig c = resolve_config(cmp_opts);
      const auto encodings = parse_list<Encoding>(encodings_arg, [](const std::string& s) { return parse_encoding(s); });
      const auto seeds = parse_list<std::uint64_t>(seeds_arg, [](const std::string& s) { return std::stoull(s); });
      print_summary(cmd_compare(c, encodings, seeds, cmp_opts.jobs, cmp_opts.threshold));
    } else if (*transfer) {
      const RunConfig c = resolve_config(xfer_opts);
      WorldType w;
      try {
        w = parse_world_type(transfer_world);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      const auto outcomes = cmd_transfer(snapshots, c, w, transfer_generations, c.run_seed, xfer_opts.jobs);
      std::cout << transfer_summary_csv(outcomes);
    } else if (*baseline) {
      RunConfig c = resolve_config(base_opts);
      std::optional<WorldType> type;
      if (!baseline_world.empty()) {
        try {
          type = parse_world_type(baseline_world);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }
      const World world = make_world(c, type);
      const auto r = cmd_baseline(world, c.ga.life, lives, c.run_seed);
      std::printf("world %s lives %d mean %.2f sd %.2f max %d\n", to_string(world.type).c_str(), lives, r.mean, r.sd, r.max);
      if (!base_opts.out.empty()) {
        std::filesystem::create_directories(c.out_dir);
        std::string csv = "life,fitness,clicks_lived,death_cause\n";
        for (std::size_t i = 0; i < r.lives.size(); ++i)
          csv += std::to_string(i) + "," + std::to_string(r.lives[i].fitness) + "," + std::to_string(r.lives[i].clicks_lived) +
                 "," + std::to_string(static_cast<int>(r.lives[i].death_cause)) + "\n";
        detail::write_file(std::filesystem::path(c.out_dir) / "baseline.csv", csv);
      }
    } else if (*scaling) {
      const auto ns = parse_list<int>(n_arg, [](const std::string& s) { return std::stoi(s); });
      const auto tables = cmd_scaling(ns);
      const std::string genes = scaling_csv(tables), proof = proof_csv(tables);
      std::cout << genes << "\n" << proof;
      if (!scale_opts.out.empty()) {
        std::filesystem::create_directories(scale_opts.out);
        detail::write_file(std::filesystem::path(scale_opts.out) / "scaling.csv", genes);
        detail::write_file(std::filesystem::path(scale_opts.out) / "proof.csv", proof);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
