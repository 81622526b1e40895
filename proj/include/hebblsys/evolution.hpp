#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "animat.hpp"
#include "genome_lsys.hpp"
#include "genome_matrix.hpp"
#include "hebbnet.hpp"
#include "rng.hpp"
#include "world.hpp"

namespace hebblsys {

enum class Encoding { Matrix, Lsys, MatrixLSG };

inline std::string to_string(Encoding e) {
  switch (e) {
    case Encoding::Matrix: return "Matrix";
    case Encoding::Lsys: return "Lsys";
    case Encoding::MatrixLSG: return "MatrixLSG";
  }
  return "?";
}

inline Encoding parse_encoding(std::string_view s) {
  if (s == "Matrix") return Encoding::Matrix;
  if (s == "Lsys") return Encoding::Lsys;
  if (s == "MatrixLSG") return Encoding::MatrixLSG;
  throw std::invalid_argument("unknown encoding '" + std::string(s) + "'");
}

struct GaParams {
  int population_size = 64;
  int neurons = 256;
  double pm = 0.01;
  double p_type = 0.3;
  int k_points = 2;
  double p_crossover = 1.0;
  GenotypeParams genotype;
  LifeParams life;
  NetworkConfig network;
};

/// Operator table per genotype representation.
template <class Genome>
struct GenomeOps;

template <>
struct GenomeOps<MatrixGenotype> {
  static Phenotype decode(const MatrixGenotype& g) { return decode_matrix(g); }
  static MatrixGenotype mutate(const MatrixGenotype& g, const GaParams& ga, Rng& rng) {
    return mutate_matrix(g, ga.pm, ga.p_type, rng);
  }
  static MatrixGenotype crossover(const MatrixGenotype& a, const MatrixGenotype& b, const GaParams& ga, Rng& rng) {
    return crossover_matrix(a, b, ga.k_points, rng);
  }
  static int neurons(const MatrixGenotype& g) { return g.n; }
};

template <>
struct GenomeOps<LsysGenotype> {
  static Phenotype decode(const LsysGenotype& g) { return expand_lsys(g); }
  static LsysGenotype mutate(const LsysGenotype& g, const GaParams& ga, Rng& rng) {
    return mutate_lsys(g, ga.pm, ga.p_type, rng);
  }
  static LsysGenotype crossover(const LsysGenotype& a, const LsysGenotype& b, const GaParams& ga, Rng& rng) {
    return crossover_lsys(a, b, ga.k_points, rng);
  }
  static int neurons(const LsysGenotype& g) { return g.n; }
};

/// MatrixLSG members are MatrixGenotypes; only their initialization differs.
struct Population {
  Encoding encoding = Encoding::Lsys;
  std::variant<std::vector<MatrixGenotype>, std::vector<LsysGenotype>> members;
  friend bool operator==(const Population&, const Population&) = default;

  std::size_t size() const {
    return std::visit([](const auto& v) { return v.size(); }, members);
  }
  int neurons() const {
    return std::visit(
        [](const auto& v) {
          using G = typename std::decay_t<decltype(v)>::value_type;
          return v.empty() ? 0 : GenomeOps<G>::neurons(v.front());
        },
        members);
  }
};

struct GenerationStats {
  int generation = 0;
  int max_food = 0;
  double mean_food = 0.0;
  int best_ever = 0;
  int starved = 0;
  double mean_clicks = 0.0;
  friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

/// Runs `task(i)` for i in [0, count) on up to `jobs` threads. The first
/// exception is rethrown after all workers stop.
template <class Task>
void parallel_for(std::size_t count, int jobs, Task&& task) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

inline LifeStreams life_streams(std::uint64_t run_seed, std::uint64_t generation, std::uint64_t index) {
  return LifeStreams{make_stream(run_seed, generation, index, StreamPurpose::FoodScatter),
                     make_stream(run_seed, generation, index, StreamPurpose::Spawn)};
}

/// One life per member; member i uses the streams for (run_seed, generation, i).
inline std::vector<LifeResult> evaluate_population(const Population& population, const World& world, const GaParams& ga,
                                                   std::uint64_t run_seed, std::uint64_t generation, int jobs = 1) {
  std::vector<LifeResult> results(population.size());
  std::visit(
      [&](const auto& members) {
        using G = typename std::decay_t<decltype(members)>::value_type;
        parallel_for(members.size(), jobs, [&](std::size_t i) {
          Phenotype phenotype;
          try {
            phenotype = GenomeOps<G>::decode(members[i]);
          } catch (const std::exception& e) {
            throw std::runtime_error("member " + std::to_string(i) + ": " + e.what());
          }
          LifeStreams streams = life_streams(run_seed, generation, i);
          results[i] = live(world, Network(phenotype, ga.network), ga.life, streams);
        });
      },
      population.members);
  return results;
}

inline std::vector<int> fitness_of(const std::vector<LifeResult>& results) {
  std::vector<int> f;
  f.reserve(results.size());
  for (const auto& r : results) f.push_back(r.fitness);
  return f;
}

/// Member indices by fitness descending, ties by lower index.
inline std::vector<std::size_t> rank_members(const std::vector<int>& fitness) {
  std::vector<std::size_t> order(fitness.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
  return order;
}

inline void check_population_size(std::size_t size) {
  if (size < 8 || size % 4 != 0)
    throw std::invalid_argument("population size must be >= 8 and divisible by 4, got " + std::to_string(size));
}

/// Elitism plus rank mating:
///   0: best verbatim, 1: best mutated, 2: runner-up verbatim, 3: runner-up mutated,
///   then size-4 mating children, round-robin over the top quarter in rank
///   order, each crossed with a partner drawn uniformly from the top third.
///   Mating children at even offsets are mutated.
template <class Genome>
std::vector<Genome> reproduce(const std::vector<Genome>& members, const std::vector<int>& fitness, const GaParams& ga, Rng& rng) {
  check_population_size(members.size());
  if (fitness.size() != members.size()) throw std::invalid_argument("fitness vector does not match population size");
  using Ops = GenomeOps<Genome>;
  const auto ranked = rank_members(fitness);
  const std::size_t size = members.size();
  const std::size_t quarter = size / 4;
  const std::size_t third = size / 3;

  std::vector<Genome> next;
  next.reserve(size);
  for (std::size_t r = 0; r < 2; ++r) {
    const Genome& elite = members[ranked[r]];
    next.push_back(elite);
    next.push_back(Ops::mutate(elite, ga, rng));
  }
  std::uniform_int_distribution<std::size_t> pick_partner(0, third - 1);
  for (std::size_t offset = 0; next.size() < size; ++offset) {
    const Genome& parent = members[ranked[offset % quarter]];
    const Genome& partner = members[ranked[pick_partner(rng)]];
    Genome child = bernoulli(rng, ga.p_crossover) ? Ops::crossover(parent, partner, ga, rng) : parent;
    if (offset % 2 == 0) child = Ops::mutate(child, ga, rng);
    next.push_back(std::move(child));
  }
  return next;
}

inline Population next_generation(const Population& population, const std::vector<int>& fitness, const GaParams& ga, Rng& rng) {
  Population next;
  next.encoding = population.encoding;
  next.members = std::visit([&](const auto& members) -> decltype(Population::members) { return reproduce(members, fitness, ga, rng); },
                            population.members);
  return next;
}

inline Population initial_population(Encoding encoding, const GaParams& ga, std::uint64_t run_seed) {
  check_population_size(static_cast<std::size_t>(ga.population_size));
  check_neuron_count(ga.neurons);
  Population pop;
  pop.encoding = encoding;
  const auto size = static_cast<std::size_t>(ga.population_size);
  if (encoding == Encoding::Lsys) {
    std::vector<LsysGenotype> members;
    for (std::size_t i = 0; i < size; ++i) {
      Rng rng = make_stream(run_seed, 0, i, StreamPurpose::Init);
      members.push_back(random_lsys_genotype(ga.neurons, ga.genotype, rng));
      members.back().name = "Member " + std::to_string(i);
    }
    pop.members = std::move(members);
  } else {
    std::vector<MatrixGenotype> members;
    for (std::size_t i = 0; i < size; ++i) {
      Rng rng = make_stream(run_seed, 0, i, StreamPurpose::Init);
      if (encoding == Encoding::Matrix) {
        members.push_back(random_matrix_genotype(ga.neurons, ga.genotype, rng));
      } else {
        members.push_back(to_matrix_genotype(random_lsys_genotype(ga.neurons, ga.genotype, rng)));
      }
    }
    pop.members = std::move(members);
  }
  return pop;
}

inline GenerationStats summarize(int generation, const std::vector<LifeResult>& results, int previous_best) {
  GenerationStats s;
  s.generation = generation;
  double food = 0.0, clicks = 0.0;
  for (const auto& r : results) {
    s.max_food = std::max(s.max_food, r.fitness);
    food += r.fitness;
    clicks += r.clicks_lived;
    if (r.death_cause == DeathCause::Starved) ++s.starved;
  }
  const double count = static_cast<double>(std::max<std::size_t>(results.size(), 1));
  s.mean_food = food / count;
  s.mean_clicks = clicks / count;
  s.best_ever = std::max(previous_best, s.max_food);
  return s;
}

struct EvolutionResult {
  std::vector<GenerationStats> stats;
  Population population;
};

using GenerationObserver = std::function<void(const GenerationStats&)>;

/// Evolves `population` in `world` for `generations` rounds of
/// evaluate -> record -> reproduce. Streams are derived from `seed` with the
/// generation counter starting at 0.
inline EvolutionResult transfer_run(Population population, const World& world, int generations, const GaParams& ga,
                                    std::uint64_t seed, int jobs = 1, const GenerationObserver& observer = {}) {
  EvolutionResult out;
  int best = 0;
  for (int g = 0; g < generations; ++g) {
    const auto gen = static_cast<std::uint64_t>(g);
    const auto results = evaluate_population(population, world, ga, seed, gen, jobs);
    const GenerationStats stats = summarize(g + 1, results, best);
    best = stats.best_ever;
    out.stats.push_back(stats);
    if (observer) observer(stats);
    Rng rng = make_stream(seed, gen, 0, StreamPurpose::Reproduction);
    population = next_generation(population, fitness_of(results), ga, rng);
  }
  out.population = std::move(population);
  return out;
}

struct EvolutionConfig {
  Encoding encoding = Encoding::Lsys;
  int generations = 100;
  GaParams ga;
  std::uint64_t run_seed = 1;
};

inline EvolutionResult run_evolution(const EvolutionConfig& config, const World& world, int jobs = 1,
                                     const GenerationObserver& observer = {}) {
  return transfer_run(initial_population(config.encoding, config.ga, config.run_seed), world, config.generations, config.ga,
                      config.run_seed, jobs, observer);
}

// Snapshot: "POPULATION <encoding> <size> <n> <generation>", then the
// members, separated by "%%" lines.

inline std::string serialize_population(const Population& pop, int generation) {
  std::string out = "POPULATION " + to_string(pop.encoding) + " " + std::to_string(pop.size()) + " " +
                    std::to_string(pop.neurons()) + " " + std::to_string(generation) + "\n";
  std::visit(
      [&](const auto& members) {
        for (std::size_t i = 0; i < members.size(); ++i) {
          if (i) out += "%%\n";
          if constexpr (std::is_same_v<typename std::decay_t<decltype(members)>::value_type, LsysGenotype>) {
            out += serialize_lsys(members[i]);
          } else {
            out += serialize_matrix(members[i]);
          }
        }
      },
      pop.members);
  return out;
}

struct PopulationSnapshot {
  Population population;
  int generation = 0;
};

inline PopulationSnapshot parse_population(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError(1, "empty population file");
  const auto header = detail::split_ws(lines[0]);
  int size = 0, n = 0, generation = 0;
  if (header.size() != 5 || header[0] != "POPULATION" || !detail::parse_int(header[2], size) ||
      !detail::parse_int(header[3], n) || !detail::parse_int(header[4], generation))
    throw ParseError(1, "expected 'POPULATION <encoding> <size> <n> <generation>'");
  PopulationSnapshot snap;
  snap.generation = generation;
  try {
    snap.population.encoding = parse_encoding(header[1]);
  } catch (const std::invalid_argument& e) {
    throw ParseError(1, e.what());
  }

  // Member chunks between separator lines, remembering where each starts.
  std::vector<std::pair<int, std::string>> chunks;
  std::string current;
  int chunk_start = 2;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i] == "%%") {
      chunks.emplace_back(chunk_start, std::move(current));
      current.clear();
      chunk_start = static_cast<int>(i) + 2;
      continue;
    }
    current += lines[i];
    current += '\n';
  }
  chunks.emplace_back(chunk_start, std::move(current));
  if (chunks.size() != static_cast<std::size_t>(size))
    throw ParseError(1, "header declares " + std::to_string(size) + " members, found " + std::to_string(chunks.size()));

  auto check_n = [&](int member_n, int line) {
    if (member_n != n) throw ParseError(line, "member neuron count " + std::to_string(member_n) + " does not match header");
  };
  if (snap.population.encoding == Encoding::Lsys) {
    std::vector<LsysGenotype> members;
    for (const auto& [line, body] : chunks) {
      members.push_back(parse_lsys(body, line));
      check_n(members.back().n, line);
    }
    snap.population.members = std::move(members);
  } else {
    std::vector<MatrixGenotype> members;
    for (const auto& [line, body] : chunks) {
      members.push_back(parse_matrix(body, line));
      check_n(members.back().n, line);
    }
    snap.population.members = std::move(members);
  }
  return snap;
}

}  // namespace hebblsys
