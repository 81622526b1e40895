#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"
#include "genome_matrix.hpp"
#include "hebbnet.hpp"
#include "rng.hpp"

namespace hebblsys {

// Constrained two-ruleset L-system genotype.
//
// Each ruleset has a 4-symbol axiom of level-1 symbols and log2(n)-2
// production lines of 16 symbols. Line i holds the right-hand sides for the
// four level-i symbols: A -> line[0..4), B -> line[4..8), C -> line[8..12),
// D -> line[12..16). Intermediate lines use {A,B,C,D}; the last line produces
// terminals {a..p}. Connectivity terminals expand to their alphabet index as
// four bits (a = 0000 ... p = 1111); weight terminal s expands to
// weight_table[4s..4s+4). Expanding both rulesets yields two n*n streams that
// pair up into the same (C, W) matrix the direct encoding uses.

inline constexpr int kAxiomLength = 4;
inline constexpr int kProductionLength = 16;
inline constexpr int kWeightTableSize = 64;
inline constexpr int kNonterminals = 4;
inline constexpr int kTerminals = 16;

struct LsysRuleset {
  std::string axiom;
  std::vector<std::string> productions;
  friend bool operator==(const LsysRuleset&, const LsysRuleset&) = default;
};

struct LsysGenotype {
  std::string name = "Lsys";
  int n = 0;
  LsysRuleset connectivity;
  LsysRuleset weight;
  std::array<int, kWeightTableSize> weight_table{};
  friend bool operator==(const LsysGenotype&, const LsysGenotype&) = default;
};

/// Number of production lines per ruleset for an n-neuron network.
inline int production_levels(int n) { return log2_exact(n) - 2; }

inline bool is_nonterminal(char c) { return c >= 'A' && c <= 'D'; }
inline bool is_terminal(char c) { return c >= 'a' && c <= 'p'; }
inline int nonterminal_index(char c) { return c - 'A'; }
inline int terminal_index(char c) { return c - 'a'; }
inline char nonterminal_symbol(int i) { return static_cast<char>('A' + i); }
inline char terminal_symbol(int i) { return static_cast<char>('a' + i); }

/// Total genes: both axioms, both rulesets' production lines, and the weight table.
inline int genotype_gene_count(int n) {
  check_neuron_count(n);
  return 2 * (kAxiomLength + kProductionLength * production_levels(n)) + kWeightTableSize;
}

namespace detail {

inline void validate_ruleset(const LsysRuleset& rs, int levels, const char* which) {
  const std::string tag = which;
  if (rs.axiom.size() != kAxiomLength) throw std::invalid_argument(tag + " axiom must have 4 symbols");
  for (char c : rs.axiom)
    if (!is_nonterminal(c)) throw std::invalid_argument(tag + " axiom symbol outside A-D");
  if (static_cast<int>(rs.productions.size()) != levels)
    throw std::invalid_argument(tag + " ruleset needs " + std::to_string(levels) + " production lines");
  for (int i = 0; i < levels; ++i) {
    const std::string& line = rs.productions[static_cast<std::size_t>(i)];
    if (line.size() != kProductionLength) throw std::invalid_argument(tag + " production line must have 16 symbols");
    const bool last = i == levels - 1;
    for (char c : line)
      if (last ? !is_terminal(c) : !is_nonterminal(c))
        throw std::invalid_argument(tag + " production line " + std::to_string(i + 1) + " has a symbol outside its alphabet");
  }
}

/// Level-by-level rewrite to the terminal string (alphabet indices 0..15).
inline std::vector<std::uint8_t> expand_ruleset(const LsysRuleset& rs) {
  std::vector<std::uint8_t> current;
  for (char c : rs.axiom) current.push_back(static_cast<std::uint8_t>(nonterminal_index(c)));
  const std::size_t levels = rs.productions.size();
  for (std::size_t level = 0; level < levels; ++level) {
    const std::string& line = rs.productions[level];
    const bool last = level + 1 == levels;
    std::vector<std::uint8_t> next(current.size() * 4);
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        const char c = line[4 * current[i] + j];
        next[4 * i + j] = static_cast<std::uint8_t>(last ? terminal_index(c) : nonterminal_index(c));
      }
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace detail

inline void validate(const LsysGenotype& g) {
  check_neuron_count(g.n);
  const int levels = production_levels(g.n);
  detail::validate_ruleset(g.connectivity, levels, "connectivity");
  detail::validate_ruleset(g.weight, levels, "weight");
  for (int w : g.weight_table)
    if (!is_legal_weight_gene(w)) throw std::invalid_argument("weight table value outside the legal set");
}

inline LsysGenotype random_lsys_genotype(int n, const GenotypeParams& params, Rng& rng) {
  check_neuron_count(n);
  const int levels = production_levels(n);
  LsysGenotype g;
  g.n = n;

  auto random_nonterminals = [&](std::size_t len) {
    std::string s(len, 'A');
    for (char& c : s) c = nonterminal_symbol(uniform_int(rng, 0, kNonterminals - 1));
    return s;
  };

  g.connectivity.axiom = random_nonterminals(kAxiomLength);
  for (int i = 0; i + 1 < levels; ++i) g.connectivity.productions.push_back(random_nonterminals(kProductionLength));
  // Connection density is imposed here: each terminal is four Bernoulli(p_conn) bits.
  std::string conn_terminals(kProductionLength, 'a');
  for (char& c : conn_terminals) {
    int bits = 0;
    for (int b = 0; b < 4; ++b) bits = (bits << 1) | (bernoulli(rng, params.p_conn) ? 1 : 0);
    c = terminal_symbol(bits);
  }
  g.connectivity.productions.push_back(std::move(conn_terminals));

  g.weight.axiom = random_nonterminals(kAxiomLength);
  for (int i = 0; i + 1 < levels; ++i) g.weight.productions.push_back(random_nonterminals(kProductionLength));
  std::string weight_terminals(kProductionLength, 'a');
  for (char& c : weight_terminals) c = terminal_symbol(uniform_int(rng, 0, kTerminals - 1));
  g.weight.productions.push_back(std::move(weight_terminals));

  for (int& w : g.weight_table) w = sample_weight_gene(params, rng);
  return g;
}

/// The (C, W) pair stream of the expanded genotype, as a direct-encoding genotype.
inline MatrixGenotype to_matrix_genotype(const LsysGenotype& g) {
  validate(g);
  const auto conn = detail::expand_ruleset(g.connectivity);
  const auto weights = detail::expand_ruleset(g.weight);
  MatrixGenotype m;
  m.n = g.n;
  m.pairs.resize(conn.size() * 4);
  for (std::size_t t = 0; t < conn.size(); ++t) {
    for (std::size_t j = 0; j < 4; ++j) {
      ConnectionGene& pair = m.pairs[4 * t + j];
      pair.c = static_cast<std::uint8_t>((conn[t] >> (3 - j)) & 1);
      pair.w = static_cast<std::int8_t>(g.weight_table[4 * static_cast<std::size_t>(weights[t]) + j]);
    }
  }
  return m;
}

inline Phenotype expand_lsys(const LsysGenotype& g) { return decode_matrix(to_matrix_genotype(g)); }

namespace detail {

/// Gene alphabet for each position in the canonical flattening.
enum class GeneKind : std::uint8_t { Nonterminal, Terminal, Weight };

// Canonical order: connectivity axiom, its lines, weight axiom, its lines,
// weight table.
inline std::vector<int> flatten(const LsysGenotype& g) {
  std::vector<int> genes;
  genes.reserve(static_cast<std::size_t>(genotype_gene_count(g.n)));
  for (const LsysRuleset* rs : {&g.connectivity, &g.weight}) {
    for (char c : rs->axiom) genes.push_back(nonterminal_index(c));
    for (const std::string& line : rs->productions)
      for (char c : line) genes.push_back(is_terminal(c) ? terminal_index(c) : nonterminal_index(c));
  }
  genes.insert(genes.end(), g.weight_table.begin(), g.weight_table.end());
  return genes;
}

inline std::vector<GeneKind> gene_kinds(int n) {
  const int levels = production_levels(n);
  std::vector<GeneKind> kinds;
  for (int r = 0; r < 2; ++r) {
    kinds.insert(kinds.end(), kAxiomLength, GeneKind::Nonterminal);
    for (int i = 0; i < levels; ++i)
      kinds.insert(kinds.end(), kProductionLength, i + 1 == levels ? GeneKind::Terminal : GeneKind::Nonterminal);
  }
  kinds.insert(kinds.end(), kWeightTableSize, GeneKind::Weight);
  return kinds;
}

inline LsysGenotype inflate(const std::vector<int>& genes, int n, std::string name) {
  const int levels = production_levels(n);
  LsysGenotype g;
  g.name = std::move(name);
  g.n = n;
  std::size_t pos = 0;
  for (LsysRuleset* rs : {&g.connectivity, &g.weight}) {
    for (int i = 0; i < kAxiomLength; ++i) rs->axiom += nonterminal_symbol(genes[pos++]);
    for (int level = 0; level < levels; ++level) {
      std::string line;
      for (int i = 0; i < kProductionLength; ++i) {
        const int v = genes[pos++];
        line += level + 1 == levels ? terminal_symbol(v) : nonterminal_symbol(v);
      }
      rs->productions.push_back(std::move(line));
    }
  }
  for (int& w : g.weight_table) w = genes[pos++];
  return g;
}

/// Uniform draw from an alphabet of `size` symbols, excluding `current`.
inline int other_symbol(int current, int size, Rng& rng) {
  const int v = uniform_int(rng, 0, size - 2);
  return v >= current ? v + 1 : v;
}

}  // namespace detail

/// Every gene mutates independently with probability pm. Symbol genes move to
/// a different symbol of their own positional alphabet; weight-table entries
/// use the weight-gene mutation.
inline LsysGenotype mutate_lsys(const LsysGenotype& g, double pm, double p_type, Rng& rng) {
  if (pm <= 0.0) return g;
  auto genes = detail::flatten(g);
  const auto kinds = detail::gene_kinds(g.n);
  for (std::size_t i = 0; i < genes.size(); ++i) {
    if (!bernoulli(rng, pm)) continue;
    switch (kinds[i]) {
      case detail::GeneKind::Nonterminal: genes[i] = detail::other_symbol(genes[i], kNonterminals, rng); break;
      case detail::GeneKind::Terminal: genes[i] = detail::other_symbol(genes[i], kTerminals, rng); break;
      case detail::GeneKind::Weight: genes[i] = mutate_weight_gene(genes[i], p_type, rng); break;
    }
  }
  return detail::inflate(genes, g.n, g.name);
}

inline LsysGenotype crossover_lsys_at(const LsysGenotype& a, const LsysGenotype& b, std::span<const std::size_t> cuts) {
  if (a.n != b.n) throw std::invalid_argument("crossover parents differ in size");
  const auto ga = detail::flatten(a);
  const auto gb = detail::flatten(b);
  return detail::inflate(splice_segments<int>(ga, gb, cuts), a.n, a.name);
}

inline LsysGenotype crossover_lsys(const LsysGenotype& a, const LsysGenotype& b, int k_points, Rng& rng) {
  if (a.n != b.n) throw std::invalid_argument("crossover parents differ in size");
  const auto cuts = draw_cut_points(static_cast<std::size_t>(genotype_gene_count(a.n)), k_points, rng);
  return crossover_lsys_at(a, b, cuts);
}

/// Symbol/terminal/neuron counts of the i-level proof system LS[i].
struct ProofSystemStats {
  int i = 0;
  std::uint64_t symbols = 0;    // S
  std::uint64_t terminals = 0;  // T
  std::uint64_t neurons = 0;    // N
  friend bool operator==(const ProofSystemStats&, const ProofSystemStats&) = default;
};

/// One axiom production (5 symbols) plus four 5-symbol productions per extra level.
inline ProofSystemStats ls_proof_stats(int i) {
  if (i < 1 || i > 31) throw std::invalid_argument("proof system level must be in [1, 31]");
  ProofSystemStats s;
  s.i = i;
  s.symbols = 5 + static_cast<std::uint64_t>(i - 1) * 20;
  s.terminals = std::uint64_t{1} << (2 * i);
  s.neurons = std::uint64_t{1} << i;
  return s;
}

// File format:
//   [name]
//   connectivity axiom, production lines
//   <blank>
//   weight axiom, production lines
//   64 weight-table integers, 32 per line

inline std::string serialize_lsys(const LsysGenotype& g) {
  std::string out = "[" + g.name + "]\n";
  out += g.connectivity.axiom + "\n";
  for (const auto& line : g.connectivity.productions) out += line + "\n";
  out += "\n";
  out += g.weight.axiom + "\n";
  for (const auto& line : g.weight.productions) out += line + "\n";
  for (int i = 0; i < kWeightTableSize; ++i) {
    out += std::to_string(g.weight_table[static_cast<std::size_t>(i)]);
    out += (i % 32 == 31) ? '\n' : ' ';
  }
  return out;
}

inline LsysGenotype parse_lsys(std::string_view text, int first_line = 1) {
  const auto lines = detail::split_lines(text);
  std::size_t pos = 0;
  auto line_no = [&](std::size_t i) { return first_line + static_cast<int>(i); };
  auto trimmed = [](std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };

  if (lines.empty()) throw ParseError(first_line, "empty Lsys genotype");
  const std::string_view header = trimmed(lines[0]);
  if (header.size() < 2 || header.front() != '[' || header.back() != ']')
    throw ParseError(first_line, "expected '[name]' header");
  LsysGenotype g;
  g.name = std::string(header.substr(1, header.size() - 2));
  pos = 1;

  auto read_ruleset = [&](LsysRuleset& rs, const char* which) {
    if (pos >= lines.size()) throw ParseError(line_no(pos), std::string("missing ") + which + " axiom");
    const std::string_view axiom = trimmed(lines[pos]);
    if (axiom.size() != kAxiomLength) throw ParseError(line_no(pos), std::string(which) + " axiom must have 4 symbols");
    for (char c : axiom)
      if (!is_nonterminal(c)) throw ParseError(line_no(pos), std::string(which) + " axiom symbol outside A-D");
    rs.axiom = std::string(axiom);
    ++pos;
    while (pos < lines.size()) {
      const std::string_view line = trimmed(lines[pos]);
      if (line.empty() || line.front() == '-' || (line.front() >= '0' && line.front() <= '9')) break;
      if (line.size() != kProductionLength)
        throw ParseError(line_no(pos), "production line must have 16 symbols, got " + std::to_string(line.size()));
      const bool terminal_line = is_terminal(line.front());
      for (char c : line)
        if (terminal_line ? !is_terminal(c) : !is_nonterminal(c))
          throw ParseError(line_no(pos), std::string("symbol '") + c + "' outside the line's alphabet");
      if (!rs.productions.empty() && is_terminal(rs.productions.back().front()))
        throw ParseError(line_no(pos), "production line after the terminal line");
      rs.productions.emplace_back(line);
      ++pos;
    }
    if (rs.productions.empty()) throw ParseError(line_no(pos), std::string(which) + " ruleset has no production lines");
    if (!is_terminal(rs.productions.back().front()))
      throw ParseError(line_no(pos), std::string(which) + " ruleset must end with a terminal line");
  };

  read_ruleset(g.connectivity, "connectivity");
  const int levels = static_cast<int>(g.connectivity.productions.size());
  if (levels + 2 > 30) throw ParseError(line_no(pos), "too many production lines");
  g.n = 1 << (levels + 2);
  if (g.n < kMinNeurons) throw ParseError(line_no(pos), "genotype encodes fewer than 32 neurons");
  if (pos >= lines.size() || !trimmed(lines[pos]).empty()) throw ParseError(line_no(pos), "expected blank line between rulesets");
  ++pos;
  read_ruleset(g.weight, "weight");
  if (static_cast<int>(g.weight.productions.size()) != levels)
    throw ParseError(line_no(pos), "weight ruleset must have " + std::to_string(levels) + " production lines");

  int count = 0;
  for (; pos < lines.size(); ++pos) {
    for (std::string_view tok : detail::split_ws(lines[pos])) {
      int w = 0;
      if (!detail::parse_int(tok, w)) throw ParseError(line_no(pos), "malformed weight '" + std::string(tok) + "'");
      if (!is_legal_weight_gene(w)) throw ParseError(line_no(pos), "illegal weight " + std::to_string(w));
      if (count >= kWeightTableSize) throw ParseError(line_no(pos), "more than 64 weight-table values");
      g.weight_table[static_cast<std::size_t>(count++)] = w;
    }
  }
  if (count != kWeightTableSize)
    throw ParseError(line_no(lines.size()), "weight table needs 64 values, got " + std::to_string(count));
  return g;
}

}  // namespace hebblsys
