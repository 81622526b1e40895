#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"
#include "rng.hpp"

namespace hebblsys {

enum class Terrain : std::uint8_t { Open, Barrier };

enum class WorldType { Open, RoundedBarrier1, Maze };

inline constexpr int kBoundaryDepth = 5;
inline constexpr int kMinWorldSide = 12;
inline constexpr double kFoodProbability = 0.75;

inline std::string to_string(WorldType t) {
  switch (t) {
    case WorldType::Open: return "Open";
    case WorldType::RoundedBarrier1: return "RoundedBarrier1";
    case WorldType::Maze: return "Maze";
  }
  return "?";
}

inline WorldType parse_world_type(std::string_view s) {
  if (s == "Open") return WorldType::Open;
  if (s == "RoundedBarrier1") return WorldType::RoundedBarrier1;
  if (s == "Maze") return WorldType::Maze;
  throw std::invalid_argument("unknown world type '" + std::string(s) + "'");
}

struct Position {
  int x = 0;
  int y = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

/// Grid environment. x grows rightward, y downward, origin top-left.
/// Terrain is fixed after generation; food is per-life state.
struct World {
  int width = 0;
  int height = 0;
  WorldType type = WorldType::Open;
  std::vector<Terrain> terrain;
  std::vector<std::uint8_t> food;

  bool in_bounds(Position p) const { return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height; }
  std::size_t index(Position p) const {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(p.x);
  }
  bool is_barrier(Position p) const { return terrain[index(p)] == Terrain::Barrier; }
  bool has_food(Position p) const { return food[index(p)] != 0; }

  bool in_boundary_ring(Position p) const {
    return p.x < kBoundaryDepth || p.y < kBoundaryDepth || p.x >= width - kBoundaryDepth ||
           p.y >= height - kBoundaryDepth;
  }

  std::size_t open_cell_count() const {
    return static_cast<std::size_t>(std::count(terrain.begin(), terrain.end(), Terrain::Open));
  }

  bool same_terrain(const World& o) const {
    return width == o.width && height == o.height && type == o.type && terrain == o.terrain;
  }
};

namespace detail {

inline World blank_world(WorldType type, int width, int height) {
  World w;
  w.width = width;
  w.height = height;
  w.type = type;
  w.terrain.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), Terrain::Open);
  w.food.assign(w.terrain.size(), 0);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (w.in_boundary_ring({x, y})) w.terrain[w.index({x, y})] = Terrain::Barrier;
  return w;
}

/// Number of 4-connected components of Open cells.
inline int open_components(const World& w) {
  std::vector<std::uint8_t> seen(w.terrain.size(), 0);
  int components = 0;
  std::queue<Position> frontier;
  for (int y = 0; y < w.height; ++y) {
    for (int x = 0; x < w.width; ++x) {
      const Position start{x, y};
      if (w.is_barrier(start) || seen[w.index(start)]) continue;
      ++components;
      seen[w.index(start)] = 1;
      frontier.push(start);
      while (!frontier.empty()) {
        const Position p = frontier.front();
        frontier.pop();
        constexpr int dx[] = {1, -1, 0, 0};
        constexpr int dy[] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          const Position q{p.x + dx[d], p.y + dy[d]};
          if (!w.in_bounds(q) || w.is_barrier(q) || seen[w.index(q)]) continue;
          seen[w.index(q)] = 1;
          frontier.push(q);
        }
      }
    }
  }
  return components;
}

inline void fill_rect(World& w, int x0, int y0, int x1, int y1, Terrain t) {
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) w.terrain[w.index({x, y})] = t;
}

// Six elliptical blobs dropped into the interior; a blob that would split the
// open area is discarded and redrawn.
inline void place_blobs(World& w, Rng& rng) {
  constexpr int kBlobs = 6;
  constexpr int kMaxAttempts = 2000;
  const int lo_x = kBoundaryDepth, hi_x = w.width - kBoundaryDepth - 1;
  const int lo_y = kBoundaryDepth, hi_y = w.height - kBoundaryDepth - 1;
  int placed = 0;
  for (int attempt = 0; placed < kBlobs && attempt < kMaxAttempts; ++attempt) {
    const int cx = uniform_int(rng, lo_x, hi_x);
    const int cy = uniform_int(rng, lo_y, hi_y);
    const int ax = uniform_int(rng, 4, 9);
    const int ay = uniform_int(rng, 4, 9);
    std::vector<Terrain> saved = w.terrain;
    for (int y = std::max(lo_y, cy - ay); y <= std::min(hi_y, cy + ay); ++y) {
      for (int x = std::max(lo_x, cx - ax); x <= std::min(hi_x, cx + ax); ++x) {
        const double ex = static_cast<double>(x - cx) / ax;
        const double ey = static_cast<double>(y - cy) / ay;
        if (ex * ex + ey * ey <= 1.0) w.terrain[w.index({x, y})] = Terrain::Barrier;
      }
    }
    if (open_components(w) == 1) {
      ++placed;
    } else {
      w.terrain = std::move(saved);
    }
  }
  if (placed == 0) throw std::runtime_error("world too small");
}

// Recursive division over a lattice of 3x3 corridor cells separated by
// 1-cell walls. Interior columns/rows left over after the lattice are walled.
inline void carve_maze(World& w, Rng& rng) {
  constexpr int kCorridor = 3;
  constexpr int kPitch = kCorridor + 1;
  const int x0 = kBoundaryDepth, y0 = kBoundaryDepth;
  const int interior_w = w.width - 2 * kBoundaryDepth;
  const int interior_h = w.height - 2 * kBoundaryDepth;
  const int cols = (interior_w + 1) / kPitch;
  const int rows = (interior_h + 1) / kPitch;
  const int used_w = cols * kPitch - 1;
  const int used_h = rows * kPitch - 1;
  if (used_w < interior_w) fill_rect(w, x0 + used_w, y0, x0 + interior_w - 1, y0 + interior_h - 1, Terrain::Barrier);
  if (used_h < interior_h) fill_rect(w, x0, y0 + used_h, x0 + interior_w - 1, y0 + interior_h - 1, Terrain::Barrier);

  struct Chamber {
    int col, row, cols, rows;
  };
  std::vector<Chamber> stack{{0, 0, cols, rows}};
  while (!stack.empty()) {
    const Chamber c = stack.back();
    stack.pop_back();
    if (c.cols < 2 && c.rows < 2) continue;
    bool vertical;
    if (c.cols > c.rows) {
      vertical = true;
    } else if (c.rows > c.cols) {
      vertical = false;
    } else {
      vertical = uniform_int(rng, 0, 1) == 0;
    }
    if (vertical) {
      const int split = uniform_int(rng, 1, c.cols - 1);
      const int passage = uniform_int(rng, 0, c.rows - 1);
      const int wx = x0 + (c.col + split) * kPitch - 1;
      const int top = y0 + c.row * kPitch;
      const int bottom = y0 + (c.row + c.rows) * kPitch - 2;
      const int gap = y0 + (c.row + passage) * kPitch;
      for (int y = top; y <= bottom; ++y)
        if (y < gap || y >= gap + kCorridor) w.terrain[w.index({wx, y})] = Terrain::Barrier;
      stack.push_back({c.col, c.row, split, c.rows});
      stack.push_back({c.col + split, c.row, c.cols - split, c.rows});
    } else {
      const int split = uniform_int(rng, 1, c.rows - 1);
      const int passage = uniform_int(rng, 0, c.cols - 1);
      const int wy = y0 + (c.row + split) * kPitch - 1;
      const int left = x0 + c.col * kPitch;
      const int right = x0 + (c.col + c.cols) * kPitch - 2;
      const int gap = x0 + (c.col + passage) * kPitch;
      for (int x = left; x <= right; ++x)
        if (x < gap || x >= gap + kCorridor) w.terrain[w.index({x, wy})] = Terrain::Barrier;
      stack.push_back({c.col, c.row, c.cols, split});
      stack.push_back({c.col, c.row + split, c.cols, c.rows - split});
    }
  }
}

}  // namespace detail

/// Deterministic terrain for the given type. No food is placed.
inline World generate_world(WorldType type, int width, int height, std::uint64_t layout_seed) {
  int min_side = kMinWorldSide;
  if (type == WorldType::Maze) min_side = 2 * kBoundaryDepth + 3;
  if (type == WorldType::RoundedBarrier1) min_side = 2 * kBoundaryDepth + 20;
  if (width < min_side || height < min_side) throw std::invalid_argument("world too small");

  World w = detail::blank_world(type, width, height);
  Rng rng{layout_seed};
  switch (type) {
    case WorldType::Open: break;
    case WorldType::RoundedBarrier1: detail::place_blobs(w, rng); break;
    case WorldType::Maze: detail::carve_maze(w, rng); break;
  }
  return w;
}

/// Each Open cell independently receives one food unit with probability 0.75.
/// Previous food is discarded.
inline void scatter_food(World& world, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < world.terrain.size(); ++i) {
    world.food[i] = 0;
    if (world.terrain[i] == Terrain::Open && unit(rng) < kFoodProbability) world.food[i] = 1;
  }
}

/// Removes the food at `p`; returns how much was there (0 or 1).
inline int consume_food(World& world, Position p) {
  auto& cell = world.food[world.index(p)];
  const int collected = cell;
  cell = 0;
  return collected;
}

inline std::size_t remaining_food(const World& world) {
  return static_cast<std::size_t>(std::count(world.food.begin(), world.food.end(), std::uint8_t{1}));
}

// World file: "width height type", then one row of '#'/'.' per line.

inline std::string save_world(const World& world) {
  std::string out = std::to_string(world.width) + " " + std::to_string(world.height) + " " + to_string(world.type) + "\n";
  out.reserve(out.size() + static_cast<std::size_t>((world.width + 1) * world.height));
  for (int y = 0; y < world.height; ++y) {
    for (int x = 0; x < world.width; ++x) out += world.is_barrier({x, y}) ? '#' : '.';
    out += '\n';
  }
  return out;
}

inline World load_world(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty()) throw ParseError(1, "empty world file");

  std::istringstream header{std::string(lines[0])};
  int width = 0, height = 0;
  std::string type_name, extra;
  if (!(header >> width >> height >> type_name) || (header >> extra))
    throw ParseError(1, "expected 'width height world_type'");
  WorldType type;
  try {
    type = parse_world_type(type_name);
  } catch (const std::invalid_argument& e) {
    throw ParseError(1, e.what());
  }
  if (width < kMinWorldSide || height < kMinWorldSide) throw ParseError(1, "world too small");
  if (lines.size() < static_cast<std::size_t>(height) + 1)
    throw ParseError(static_cast<int>(lines.size()) + 1, "missing grid rows");
  for (std::size_t i = static_cast<std::size_t>(height) + 1; i < lines.size(); ++i)
    if (!lines[i].empty()) throw ParseError(static_cast<int>(i) + 1, "unexpected content after grid");

  World w;
  w.width = width;
  w.height = height;
  w.type = type;
  w.terrain.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  w.food.assign(w.terrain.size(), 0);
  for (int y = 0; y < height; ++y) {
    const std::string_view row = lines[static_cast<std::size_t>(y) + 1];
    const int line_no = y + 2;
    if (static_cast<int>(row.size()) != width)
      throw ParseError(line_no, "expected " + std::to_string(width) + " cells, got " + std::to_string(row.size()));
    for (int x = 0; x < width; ++x) {
      const char c = row[static_cast<std::size_t>(x)];
      if (c != '#' && c != '.') throw ParseError(line_no, std::string("unknown cell character '") + c + "'");
      w.terrain[w.index({x, y})] = c == '#' ? Terrain::Barrier : Terrain::Open;
      if (c == '.' && w.in_boundary_ring({x, y})) throw ParseError(line_no, "open cell inside boundary ring");
    }
  }
  return w;
}

}  // namespace hebblsys
