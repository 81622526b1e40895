#pragma once

#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "common.hpp"
#include "evolution.hpp"
#include "world.hpp"

namespace hebblsys {

/// Everything a run needs. Defaults match the documented experiment setup.
struct RunConfig {
  Encoding encoding = Encoding::Lsys;
  WorldType world_type = WorldType::RoundedBarrier1;
  std::string world_file;  // when set, terrain is loaded instead of generated
  int width = 110;
  int height = 90;
  std::uint64_t layout_seed = 1;
  int generations = 100;
  std::uint64_t run_seed = 1;
  std::string out_dir = "out";
  GaParams ga;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError("config key '" + std::string(key) + "': expected a number, got '" + std::string(value) + "'");
  return out;
}

inline bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected true/false, got '" + std::string(value) + "'");
}

}  // namespace detail

/// Range checks shared by the file loader and programmatic callers.
inline void validate(const RunConfig& c) {
  auto prob = [](const char* key, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string("config key '") + key + "': probability must be in [0, 1]");
  };
  prob("pm", c.ga.pm);
  prob("p_type", c.ga.p_type);
  prob("p_crossover", c.ga.p_crossover);
  prob("p_conn", c.ga.genotype.p_conn);
  prob("p_hard", c.ga.genotype.p_hard);
  prob("p_adult", c.ga.genotype.p_adult);
  if (c.ga.k_points < 1) throw ConfigError("config key 'k_points': must be >= 1");
  if (c.ga.population_size < 8 || c.ga.population_size % 4 != 0)
    throw ConfigError("config key 'population_size': must be >= 8 and divisible by 4");
  if (c.ga.neurons < kMinNeurons || !is_power_of_two(c.ga.neurons))
    throw ConfigError("config key 'neurons': must be a power of two >= 32");
  if (c.generations < 0) throw ConfigError("config key 'generations': must be >= 0");
  if (c.ga.life.life_span < 1) throw ConfigError("config key 'life_span': must be >= 1");
  if (c.ga.life.starvation_limit < 1 || c.ga.life.starvation_limit > c.ga.life.life_span)
    throw ConfigError("config key 'starvation_limit': must be in [1, life_span]");
  if (c.ga.life.infancy_span < 0 || c.ga.life.infancy_span > c.ga.life.life_span)
    throw ConfigError("config key 'infancy_span': must be in [0, life_span]");
  if (!(c.ga.network.eta > 0.0)) throw ConfigError("config key 'eta': must be positive");
  if (c.world_file.empty() && (c.width < kMinWorldSide || c.height < kMinWorldSide))
    throw ConfigError("config keys 'width'/'height': world too small");
}

/// `key = value` lines; `#` starts a comment. Unknown keys and malformed
/// values raise ConfigError naming the key.
inline RunConfig load_config(std::string_view text) {
  RunConfig c;
  using Setter = std::function<void(std::string_view, std::string_view)>;
  const std::map<std::string, Setter, std::less<>> setters{
      {"encoding",
       [&](auto k, auto v) {
         try {
           c.encoding = parse_encoding(v);
         } catch (const std::invalid_argument&) {
           throw ConfigError("config key '" + std::string(k) + "': unknown encoding '" + std::string(v) + "'");
         }
       }},
      {"world_type",
       [&](auto k, auto v) {
         try {
           c.world_type = parse_world_type(v);
         } catch (const std::invalid_argument&) {
           throw ConfigError("config key '" + std::string(k) + "': unknown world type '" + std::string(v) + "'");
         }
       }},
      {"world_file", [&](auto, auto v) { c.world_file = std::string(v); }},
      {"width", [&](auto k, auto v) { c.width = detail::parse_number<int>(k, v); }},
      {"height", [&](auto k, auto v) { c.height = detail::parse_number<int>(k, v); }},
      {"layout_seed", [&](auto k, auto v) { c.layout_seed = detail::parse_number<std::uint64_t>(k, v); }},
      {"generations", [&](auto k, auto v) { c.generations = detail::parse_number<int>(k, v); }},
      {"run_seed", [&](auto k, auto v) { c.run_seed = detail::parse_number<std::uint64_t>(k, v); }},
      {"out_dir", [&](auto, auto v) { c.out_dir = std::string(v); }},
      {"population_size", [&](auto k, auto v) { c.ga.population_size = detail::parse_number<int>(k, v); }},
      {"neurons", [&](auto k, auto v) { c.ga.neurons = detail::parse_number<int>(k, v); }},
      {"pm", [&](auto k, auto v) { c.ga.pm = detail::parse_number<double>(k, v); }},
      {"p_type", [&](auto k, auto v) { c.ga.p_type = detail::parse_number<double>(k, v); }},
      {"k_points", [&](auto k, auto v) { c.ga.k_points = detail::parse_number<int>(k, v); }},
      {"p_crossover", [&](auto k, auto v) { c.ga.p_crossover = detail::parse_number<double>(k, v); }},
      {"p_conn", [&](auto k, auto v) { c.ga.genotype.p_conn = detail::parse_number<double>(k, v); }},
      {"p_hard", [&](auto k, auto v) { c.ga.genotype.p_hard = detail::parse_number<double>(k, v); }},
      {"p_adult", [&](auto k, auto v) { c.ga.genotype.p_adult = detail::parse_number<double>(k, v); }},
      {"life_span", [&](auto k, auto v) { c.ga.life.life_span = detail::parse_number<int>(k, v); }},
      {"starvation_limit", [&](auto k, auto v) { c.ga.life.starvation_limit = detail::parse_number<int>(k, v); }},
      {"infancy_span", [&](auto k, auto v) { c.ga.life.infancy_span = detail::parse_number<int>(k, v); }},
      {"end_on_empty", [&](auto k, auto v) { c.ga.life.end_on_empty = detail::parse_bool(k, v); }},
      {"eta", [&](auto k, auto v) { c.ga.network.eta = detail::parse_number<double>(k, v); }},
      {"theta", [&](auto k, auto v) { c.ga.network.theta = detail::parse_number<double>(k, v); }},
      {"rule",
       [&](auto k, auto v) {
         if (v == "Oja") c.ga.network.rule = LearningRule::Oja;
         else if (v == "Hebb") c.ga.network.rule = LearningRule::Hebb;
         else throw ConfigError("config key '" + std::string(k) + "': expected Oja or Hebb, got '" + std::string(v) + "'");
       }},
  };

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string_view key = detail::trim(line.substr(0, eq));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
    it->second(key, value);
  }
  validate(c);
  return c;
}

}  // namespace hebblsys
