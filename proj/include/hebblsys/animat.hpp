#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hebbnet.hpp"
#include "rng.hpp"
#include "world.hpp"

namespace hebblsys {

enum class Heading : std::uint8_t { North, East, South, West };

struct Pose {
  Position position;
  Heading heading = Heading::North;
  friend bool operator==(const Pose&, const Pose&) = default;
};

enum class Turn : std::uint8_t { Left, Right, None };
enum class Move : std::uint8_t { Forward, Backward, Stay };

struct Action {
  Turn turn = Turn::None;
  Move move = Move::Stay;
  friend bool operator==(const Action&, const Action&) = default;
};

struct LifeParams {
  int life_span = 8000;
  int starvation_limit = 256;
  int infancy_span = 800;
  bool end_on_empty = true;
};

enum class DeathCause : std::uint8_t { LifeSpan, Starved, WorldEmpty };

struct LifeResult {
  int fitness = 0;
  int clicks_lived = 0;
  DeathCause death_cause = DeathCause::LifeSpan;
  friend bool operator==(const LifeResult&, const LifeResult&) = default;
};

/// Independent per-life streams: one scatters food, the other picks the spawn
/// pose (and, for the random policy, the actions).
struct LifeStreams {
  Rng food;
  Rng spawn;
};

inline Position forward_step(Heading h) {
  switch (h) {
    case Heading::North: return {0, -1};
    case Heading::East: return {1, 0};
    case Heading::South: return {0, 1};
    case Heading::West: return {-1, 0};
  }
  return {0, 0};
}

inline Heading rotate(Heading h, Turn t) {
  const int v = static_cast<int>(h);
  switch (t) {
    case Turn::Left: return static_cast<Heading>((v + 3) % 4);
    case Turn::Right: return static_cast<Heading>((v + 1) % 4);
    case Turn::None: return h;
  }
  return h;
}

struct SensorCell {
  int distance;
  int lateral;  // negative = left of heading
};

/// Forward fan of 13 cells, near to far, left to right within a row.
inline constexpr std::array<SensorCell, 13> kSensorLayout{{
    {1, -1}, {1, 0}, {1, 1},
    {2, -2}, {2, -1}, {2, 0}, {2, 1}, {2, 2},
    {3, -2}, {3, -1}, {3, 0}, {3, 1}, {3, 2},
}};

/// Two bits per sensed cell: (is_barrier, has_food). Off-grid reads as barrier.
inline SensorVector sense(const World& world, const Pose& pose) {
  const Position fwd = forward_step(pose.heading);
  const Position right = forward_step(rotate(pose.heading, Turn::Right));
  SensorVector bits{};
  for (std::size_t i = 0; i < kSensorLayout.size(); ++i) {
    const auto [d, l] = kSensorLayout[i];
    const Position p{pose.position.x + d * fwd.x + l * right.x, pose.position.y + d * fwd.y + l * right.y};
    if (!world.in_bounds(p)) {
      bits[2 * i] = 1;
      continue;
    }
    bits[2 * i] = world.is_barrier(p) ? 1 : 0;
    bits[2 * i + 1] = world.has_food(p) ? 1 : 0;
  }
  return bits;
}

/// Bits 0-2 flag (Left, Right, None), bits 3-5 flag (Backward, Forward, Stay).
/// The highest set flag of each triple wins; an empty triple means None/Stay.
inline Action decode_output(const Register& r) {
  Action a;
  if (r[2]) a.turn = Turn::None;
  else if (r[1]) a.turn = Turn::Right;
  else if (r[0]) a.turn = Turn::Left;
  if (r[5]) a.move = Move::Stay;
  else if (r[4]) a.move = Move::Forward;
  else if (r[3]) a.move = Move::Backward;
  return a;
}

/// Turn first, then move along the new heading unless the target is a barrier
/// or off-grid. Returns the food collected by entering a new cell.
inline int apply_action(World& world, Pose& pose, Action action) {
  pose.heading = rotate(pose.heading, action.turn);
  if (action.move == Move::Stay) return 0;
  const Position step = forward_step(pose.heading);
  const int sign = action.move == Move::Forward ? 1 : -1;
  const Position target{pose.position.x + sign * step.x, pose.position.y + sign * step.y};
  if (!world.in_bounds(target) || world.is_barrier(target)) return 0;
  pose.position = target;
  return consume_food(world, target);
}

/// Scatters food and picks a uniformly random open cell and heading.
inline Pose begin_life(World& world, LifeStreams& streams) {
  scatter_food(world, streams.food);
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < world.terrain.size(); ++i)
    if (world.terrain[i] == Terrain::Open) open.push_back(i);
  if (open.empty()) throw std::runtime_error("no spawn cell");
  const std::size_t cell = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(streams.spawn)];
  Pose pose;
  pose.position = {static_cast<int>(cell % static_cast<std::size_t>(world.width)),
                   static_cast<int>(cell / static_cast<std::size_t>(world.width))};
  pose.heading = static_cast<Heading>(uniform_int(streams.spawn, 0, 3));
  return pose;
}

/// Click loop over an already-populated world starting from `pose`.
/// `policy(sensor, stage)` returns the output register for one click.
template <class Policy>
LifeResult run_life(World world, Pose pose, const LifeParams& params, Policy&& policy) {
  std::size_t food_left = remaining_food(world);
  LifeResult result;
  int hungry = 0;
  for (int click = 1; click <= params.life_span; ++click) {
    const LifeStage stage = click <= params.infancy_span ? LifeStage::Infancy : LifeStage::Adult;
    const Register out = policy(sense(world, pose), stage);
    const int collected = apply_action(world, pose, decode_output(out));
    result.clicks_lived = click;
    if (collected) {
      ++result.fitness;
      --food_left;
      hungry = 0;
    } else {
      ++hungry;
    }
    if (params.end_on_empty && food_left == 0) {
      result.death_cause = DeathCause::WorldEmpty;
      return result;
    }
    if (hungry >= params.starvation_limit) {
      result.death_cause = DeathCause::Starved;
      return result;
    }
  }
  result.death_cause = DeathCause::LifeSpan;
  return result;
}

/// Scatters food and spawns from `streams`, then runs the click loop.
template <class Policy>
LifeResult simulate_life(const World& world_template, const LifeParams& params, LifeStreams& streams, Policy&& policy) {
  World world = world_template;
  const Pose pose = begin_life(world, streams);
  return run_life(std::move(world), pose, params, std::forward<Policy>(policy));
}

/// Network-driven click loop; infancy learning gates on the click index.
inline LifeResult live_from(World world, Pose pose, Network network, const LifeParams& params) {
  return run_life(std::move(world), pose, params, [&](const SensorVector& sensor, LifeStage stage) {
    const Register out = network.fire(sensor);
    network.learn(stage);
    return out;
  });
}

/// One animat life driven by `network`. The network is taken by value: each
/// life learns from a fresh copy.
inline LifeResult live(const World& world_template, Network network, const LifeParams& params, LifeStreams& streams) {
  if (network.neurons() < kMinNeurons) throw std::invalid_argument("network too small for the animat interface");
  return simulate_life(world_template, params, streams, [&](const SensorVector& sensor, LifeStage stage) {
    const Register out = network.fire(sensor);
    network.learn(stage);
    return out;
  });
}

/// Baseline: every click the register is drawn uniformly from all 64 patterns.
inline LifeResult random_policy_life(const World& world_template, const LifeParams& params, LifeStreams& streams) {
  return simulate_life(world_template, params, streams, [&](const SensorVector&, LifeStage) {
    const int pattern = uniform_int(streams.spawn, 0, 63);
    Register r{};
    for (int b = 0; b < kOutputBits; ++b) r[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>((pattern >> b) & 1);
    return r;
  });
}

}  // namespace hebblsys
