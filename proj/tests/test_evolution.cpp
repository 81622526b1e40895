#include <gtest/gtest.h>

#include <map>

#include "hebblsys/evolution.hpp"

using namespace hebblsys;

namespace {

GaParams small_ga(int size = 16) {
  GaParams ga;
  ga.population_size = size;
  ga.neurons = 32;
  ga.genotype.p_conn = 0.2;
  ga.life.life_span = 300;
  ga.life.infancy_span = 30;
  return ga;
}

const World& small_world() {
  static const World w = generate_world(WorldType::RoundedBarrier1, 40, 36, 2);
  return w;
}

std::vector<MatrixGenotype> distinct_members(int size) {
  std::vector<MatrixGenotype> m;
  for (int i = 0; i < size; ++i) {
    Rng rng{static_cast<std::uint64_t>(1000 + i)};
    m.push_back(random_matrix_genotype(32, GenotypeParams{}, rng));
  }
  return m;
}

}  // namespace

TEST(Evolution, RankingBreaksTiesByIndex) {
  EXPECT_EQ(rank_members({5, 5, 3, 9}), (std::vector<std::size_t>{3, 0, 1, 2}));
}

TEST(Evolution, ReproductionLayout) {
  const auto members = distinct_members(64);
  std::vector<int> fitness(64);
  for (int i = 0; i < 64; ++i) fitness[static_cast<std::size_t>(i)] = i;  // member 63 ranks first
  GaParams ga = small_ga(64);
  ga.pm = 0.0;
  ga.p_crossover = 0.0;
  Rng rng{1};
  const auto next = reproduce(members, fitness, ga, rng);
  ASSERT_EQ(next.size(), 64u);
  EXPECT_EQ(next[0], members[63]);
  EXPECT_EQ(next[1], members[63]);
  EXPECT_EQ(next[2], members[62]);
  EXPECT_EQ(next[3], members[62]);

  // 60 mating children over a top quarter of 16: rounds of 16, 16, 16, 12.
  std::map<std::size_t, int> uses;
  for (std::size_t c = 4; c < 64; ++c) {
    std::size_t parent = 64;
    for (std::size_t m = 0; m < 64; ++m)
      if (next[c] == members[m]) parent = m;
    ASSERT_NE(parent, 64u) << c;
    ++uses[parent];
  }
  ASSERT_EQ(uses.size(), 16u);
  for (std::size_t rank = 0; rank < 16; ++rank) EXPECT_EQ(uses[63 - rank], rank < 12 ? 4 : 3) << rank;
}

TEST(Evolution, MatingPartnersComeFromTopThird) {
  // Every member is tagged by a distinct uniform W value.
  std::vector<MatrixGenotype> members;
  for (int i = 0; i < 16; ++i)
    members.push_back(MatrixGenotype{32, std::vector<ConnectionGene>(1024, ConnectionGene{0, static_cast<std::int8_t>(i - 10)})});
  std::vector<int> fitness(16);
  for (int i = 0; i < 16; ++i) fitness[static_cast<std::size_t>(i)] = 100 - i;  // member 0 ranks first
  GaParams ga = small_ga(16);
  ga.pm = 0.0;
  ga.k_points = 1;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng{s};
    const auto next = reproduce(members, fitness, ga, rng);
    for (std::size_t c = 4; c < next.size(); ++c) {
      const int tail = next[c].pairs.back().w;  // second segment comes from the partner
      EXPECT_GE(tail + 10, 0);
      EXPECT_LT(tail + 10, 5) << "partner outside the top third";
    }
  }
}

TEST(Evolution, ZeroMutationElitesAreCopies) {
  const auto members = distinct_members(16);
  std::vector<int> fitness(16, 0);
  fitness[5] = 10;
  fitness[9] = 7;
  GaParams ga = small_ga(16);
  ga.pm = 0.0;
  Rng rng{2};
  const auto next = reproduce(members, fitness, ga, rng);
  EXPECT_EQ(next[0], members[5]);
  EXPECT_EQ(next[1], next[0]);
  EXPECT_EQ(next[2], members[9]);
  EXPECT_EQ(next[3], next[2]);
}

TEST(Evolution, RejectsBadPopulationSizes) {
  const auto members = distinct_members(6);
  Rng rng{1};
  EXPECT_THROW(reproduce(members, std::vector<int>(6, 0), small_ga(8), rng), std::invalid_argument);
  const auto ten = distinct_members(10);
  EXPECT_THROW(reproduce(ten, std::vector<int>(10, 0), small_ga(8), rng), std::invalid_argument);
}

TEST(Evolution, InitialPopulations) {
  const GaParams ga = small_ga();
  const auto lsys = initial_population(Encoding::Lsys, ga, 4);
  const auto lsg = initial_population(Encoding::MatrixLSG, ga, 4);
  const auto matrix = initial_population(Encoding::Matrix, ga, 4);
  ASSERT_EQ(lsys.size(), 16u);
  ASSERT_EQ(lsg.size(), 16u);
  ASSERT_EQ(matrix.size(), 16u);
  const auto& l = std::get<std::vector<LsysGenotype>>(lsys.members);
  const auto& m = std::get<std::vector<MatrixGenotype>>(lsg.members);
  for (std::size_t i = 0; i < l.size(); ++i) EXPECT_EQ(m[i], to_matrix_genotype(l[i]));
  EXPECT_EQ(initial_population(Encoding::Matrix, ga, 4), matrix);
  EXPECT_NE(initial_population(Encoding::Matrix, ga, 5), matrix);
}

TEST(Evolution, ZeroGenerations) {
  const auto r = run_evolution({Encoding::Lsys, 0, small_ga(), 3}, small_world());
  EXPECT_TRUE(r.stats.empty());
  EXPECT_EQ(r.population, initial_population(Encoding::Lsys, small_ga(), 3));
}

TEST(Evolution, DeterministicAcrossWorkerCounts) {
  const EvolutionConfig cfg{Encoding::Lsys, 4, small_ga(), 11};
  const auto one = run_evolution(cfg, small_world(), 1);
  const auto four = run_evolution(cfg, small_world(), 4);
  EXPECT_EQ(one.stats, four.stats);
  EXPECT_EQ(one.population, four.population);
}

TEST(Evolution, TransferOfFreshPopulationEqualsRun) {
  const EvolutionConfig cfg{Encoding::Matrix, 3, small_ga(), 5};
  const auto run = run_evolution(cfg, small_world());
  const auto transfer = transfer_run(initial_population(Encoding::Matrix, cfg.ga, 5), small_world(), 3, cfg.ga, 5);
  EXPECT_EQ(run.stats, transfer.stats);
  EXPECT_EQ(run.population, transfer.population);
}

TEST(Evolution, StatsInvariants) {
  const auto r = run_evolution({Encoding::MatrixLSG, 5, small_ga(), 2}, small_world());
  ASSERT_EQ(r.stats.size(), 5u);
  int best = 0;
  for (std::size_t g = 0; g < r.stats.size(); ++g) {
    const auto& s = r.stats[g];
    EXPECT_EQ(s.generation, static_cast<int>(g) + 1);
    EXPECT_LE(s.mean_food, s.max_food);
    EXPECT_GE(s.best_ever, best);
    EXPECT_GE(s.best_ever, s.max_food);
    EXPECT_LE(s.starved, 16);
    best = s.best_ever;
  }
}

TEST(Evolution, EliteSurvivesIntoNextGeneration) {
  const GaParams ga = small_ga();
  Population pop = initial_population(Encoding::Lsys, ga, 9);
  const auto results = evaluate_population(pop, small_world(), ga, 9, 0);
  const auto ranked = rank_members(fitness_of(results));
  Rng rng = make_stream(9, 0, 0, StreamPurpose::Reproduction);
  const Population next = next_generation(pop, fitness_of(results), ga, rng);
  EXPECT_EQ(std::get<std::vector<LsysGenotype>>(next.members)[0], std::get<std::vector<LsysGenotype>>(pop.members)[ranked[0]]);
}

TEST(Evolution, EvaluationNamesFailingMember) {
  Population pop = initial_population(Encoding::Matrix, small_ga(8), 1);
  std::get<std::vector<MatrixGenotype>>(pop.members)[3].pairs[0].w = 55;
  try {
    evaluate_population(pop, small_world(), small_ga(8), 1, 0);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("member 3"), std::string::npos);
  }
}

TEST(Evolution, SnapshotRoundTrip) {
  for (Encoding e : {Encoding::Lsys, Encoding::Matrix, Encoding::MatrixLSG}) {
    const auto pop = initial_population(e, small_ga(8), 7);
    const auto snap = parse_population(serialize_population(pop, 42));
    EXPECT_EQ(snap.generation, 42);
    EXPECT_EQ(snap.population, pop) << to_string(e);
  }
}

TEST(Evolution, SnapshotParseErrors) {
  EXPECT_THROW(parse_population(""), ParseError);
  EXPECT_THROW(parse_population("POPULATION Bogus 8 32 0\n"), ParseError);
  std::string text = serialize_population(initial_population(Encoding::Matrix, small_ga(8), 7), 1);
  text.erase(text.rfind("%%"));
  EXPECT_THROW(parse_population(text), ParseError);
}

TEST(Evolution, EncodingNames) {
  for (Encoding e : {Encoding::Lsys, Encoding::Matrix, Encoding::MatrixLSG}) EXPECT_EQ(parse_encoding(to_string(e)), e);
  EXPECT_THROW(parse_encoding("lsys"), std::invalid_argument);
}
