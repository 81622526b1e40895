#include <gtest/gtest.h>

#include "hebblsys/world.hpp"
#include "oracles.hpp"

using namespace hebblsys;

namespace {

std::string grid_text(int w, int h, const char* type, char fill) {
  std::string s = std::to_string(w) + " " + std::to_string(h) + " " + type + "\n";
  for (int y = 0; y < h; ++y) s += std::string(static_cast<std::size_t>(w), fill) + "\n";
  return s;
}

bool ring_is_barrier(const World& w) {
  for (int y = 0; y < w.height; ++y)
    for (int x = 0; x < w.width; ++x)
      if ((x < 5 || y < 5 || x >= w.width - 5 || y >= w.height - 5) && !w.is_barrier({x, y})) return false;
  return true;
}

}  // namespace

TEST(World, OpenInteriorIsEntirelyOpen) {
  const World w = generate_world(WorldType::Open, 110, 90, 42);
  EXPECT_TRUE(ring_is_barrier(w));
  EXPECT_EQ(w.open_cell_count(), 100u * 80u);
  for (int y = 5; y < 85; ++y)
    for (int x = 5; x < 105; ++x) ASSERT_FALSE(w.is_barrier({x, y}));
}

TEST(World, GenerationIsDeterministic) {
  for (auto type : {WorldType::Open, WorldType::RoundedBarrier1, WorldType::Maze}) {
    const World a = generate_world(type, 110, 90, 7), b = generate_world(type, 110, 90, 7);
    EXPECT_TRUE(a.same_terrain(b)) << to_string(type);
  }
  EXPECT_FALSE(generate_world(WorldType::Maze, 110, 90, 1).same_terrain(generate_world(WorldType::Maze, 110, 90, 2)));
}

TEST(World, BlobsLeaveOneConnectedOpenRegion) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const World w = generate_world(WorldType::RoundedBarrier1, 110, 90, seed);
    EXPECT_TRUE(ring_is_barrier(w));
    EXPECT_LT(w.open_cell_count(), 100u * 80u) << seed;
    EXPECT_EQ(oracle::open_components(w), 1) << seed;
  }
}

TEST(World, MazeIsConnectedAndWalled) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const World w = generate_world(WorldType::Maze, 110, 90, seed);
    EXPECT_TRUE(ring_is_barrier(w));
    EXPECT_EQ(oracle::open_components(w), 1) << seed;
    EXPECT_LT(w.open_cell_count(), generate_world(WorldType::Open, 110, 90, 0).open_cell_count());
  }
}

TEST(World, TooSmallIsRejected) {
  EXPECT_THROW(generate_world(WorldType::Open, 11, 90, 1), std::invalid_argument);
  EXPECT_NO_THROW(generate_world(WorldType::Open, 12, 12, 1));
  try {
    generate_world(WorldType::Maze, 12, 12, 1);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "world too small");
  }
}

TEST(World, SaveLoadRoundTrip) {
  for (auto type : {WorldType::Open, WorldType::RoundedBarrier1, WorldType::Maze}) {
    const World w = generate_world(type, 110, 90, 3);
    const World back = load_world(save_world(w));
    EXPECT_TRUE(back.same_terrain(w));
    EXPECT_EQ(back.type, type);
    EXPECT_EQ(remaining_food(back), 0u);
  }
}

TEST(World, AllBarrierFileLoads) {
  const World w = load_world(grid_text(12, 12, "Open", '#'));
  EXPECT_EQ(w.open_cell_count(), 0u);
}

TEST(World, ParseErrorsNameTheLine) {
  auto line_of = [](const std::string& text) {
    try {
      load_world(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  std::string ragged = grid_text(12, 12, "Open", '#');
  ragged.insert(ragged.find('\n', ragged.find('\n') + 1 + 13 * 3), "#");  // row 4 -> file line 5
  EXPECT_EQ(line_of(ragged), 5);

  std::string bad_char = grid_text(12, 12, "Open", '#');
  bad_char[bad_char.find('\n') + 1 + 13 * 6 + 7] = 'x';
  EXPECT_EQ(line_of(bad_char), 8);

  std::string ring_open = grid_text(12, 12, "Open", '#');
  ring_open[ring_open.find('\n') + 1 + 2] = '.';
  EXPECT_EQ(line_of(ring_open), 2);

  EXPECT_EQ(line_of("12 12 Open\n############\n"), 3);
  EXPECT_EQ(line_of("12 twelve Open\n"), 1);
}

TEST(World, ScatterOnlyOnOpenCells) {
  World w = generate_world(WorldType::RoundedBarrier1, 110, 90, 1);
  Rng rng{5};
  scatter_food(w, rng);
  for (std::size_t i = 0; i < w.terrain.size(); ++i)
    if (w.food[i]) ASSERT_EQ(w.terrain[i], Terrain::Open);
}

TEST(World, ScatterZeroOpenCells) {
  World w = load_world(grid_text(12, 12, "Open", '#'));
  Rng rng{1};
  scatter_food(w, rng);
  EXPECT_EQ(remaining_food(w), 0u);
}

TEST(World, ScatterDeterministicPerStream) {
  World a = generate_world(WorldType::Open, 110, 90, 0), b = a;
  Rng ra = make_stream(9, 2, 3, StreamPurpose::FoodScatter), rb = make_stream(9, 2, 3, StreamPurpose::FoodScatter);
  scatter_food(a, ra);
  scatter_food(b, rb);
  EXPECT_EQ(a.food, b.food);
}

TEST(World, ScatterCountWithinBinomialBand) {
  const auto band = oracle::binomial_band(8000, 0.75, 4.0);
  ASSERT_GE(band.lo, 5700);
  ASSERT_LE(band.hi, 6300);
  World w = generate_world(WorldType::Open, 110, 90, 0);
  int inside = 0;
  const int seeds = 300;
  double total = 0;
  for (int s = 0; s < seeds; ++s) {
    Rng rng = make_stream(static_cast<std::uint64_t>(s), 0, 0, StreamPurpose::FoodScatter);
    scatter_food(w, rng);
    const double count = static_cast<double>(remaining_food(w));
    total += count;
    if (count >= 5700 && count <= 6300) ++inside;
  }
  EXPECT_GE(inside, seeds * 99 / 100);
  // Mean of 300 draws has sigma ~2.2 around 6000.
  EXPECT_NEAR(total / seeds, 6000.0, 12.0);
}

TEST(World, ScatterResetsPreviousFood) {
  World w = generate_world(WorldType::Open, 20, 20, 0);
  std::fill(w.food.begin(), w.food.end(), std::uint8_t{1});
  Rng rng{3};
  scatter_food(w, rng);
  for (std::size_t i = 0; i < w.terrain.size(); ++i)
    if (w.terrain[i] == Terrain::Barrier) ASSERT_EQ(w.food[i], 0);
}

TEST(World, ConsumeFood) {
  World w = generate_world(WorldType::Open, 20, 20, 0);
  w.food[w.index({7, 7})] = 1;
  w.food[w.index({8, 7})] = 1;
  const auto before = w.food;
  EXPECT_EQ(consume_food(w, {7, 7}), 1);
  EXPECT_EQ(consume_food(w, {7, 7}), 0);
  EXPECT_EQ(consume_food(w, {6, 6}), 0);
  for (std::size_t i = 0; i < w.food.size(); ++i)
    if (i != w.index({7, 7})) EXPECT_EQ(w.food[i], before[i]);
  EXPECT_EQ(remaining_food(w), 1u);
}
