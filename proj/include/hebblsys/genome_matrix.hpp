#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"
#include "hebbnet.hpp"
#include "rng.hpp"

namespace hebblsys {

// Weight genes take values in [-10..10] and 100. 0 is a soft connection,
// 100 an adult-learning soft connection, anything else a hard connection
// with weight W/10.
inline constexpr int kSoftWeightGene = 0;
inline constexpr int kAdultSoftWeightGene = 100;

inline bool is_legal_weight_gene(int w) { return (w >= -10 && w <= 10) || w == kAdultSoftWeightGene; }

inline ConnectionClass weight_gene_class(int w) {
  if (w == kSoftWeightGene) return ConnectionClass::Soft;
  if (w == kAdultSoftWeightGene) return ConnectionClass::AdultSoft;
  return ConnectionClass::Hard;
}

struct GenotypeParams {
  double p_conn = 0.05;
  double p_hard = 0.5;
  double p_adult = 0.1;
};

inline void check_neuron_count(int n) {
  if (n < kMinNeurons || !is_power_of_two(n))
    throw std::invalid_argument("neuron count must be a power of two >= 32, got " + std::to_string(n));
}

namespace detail {

/// Uniform nonzero hard weight gene in [-10..10], excluding `exclude` when it is itself a hard value.
inline int draw_hard_weight(Rng& rng, int exclude = 0) {
  for (;;) {
    const int w = uniform_int(rng, -10, 9);
    const int v = w >= 0 ? w + 1 : w;  // skip 0
    if (v != exclude) return v;
  }
}

}  // namespace detail

/// Hard with p_hard (uniform nonzero value); otherwise AdultSoft with p_adult, else Soft.
inline int sample_weight_gene(const GenotypeParams& params, Rng& rng) {
  if (bernoulli(rng, params.p_hard)) return detail::draw_hard_weight(rng);
  return bernoulli(rng, params.p_adult) ? kAdultSoftWeightGene : kSoftWeightGene;
}

/// Mutation of a single weight gene. With probability p_type the connection
/// type moves to one of the two other categories (chosen uniformly);
/// otherwise a hard value is redrawn to a different nonzero value and soft
/// values stay as they are.
inline int mutate_weight_gene(int w, double p_type, Rng& rng) {
  const ConnectionClass cls = weight_gene_class(w);
  if (bernoulli(rng, p_type)) {
    const bool first = uniform_int(rng, 0, 1) == 0;
    switch (cls) {
      case ConnectionClass::Hard: return first ? kSoftWeightGene : kAdultSoftWeightGene;
      case ConnectionClass::Soft: return first ? detail::draw_hard_weight(rng) : kAdultSoftWeightGene;
      case ConnectionClass::AdultSoft: return first ? detail::draw_hard_weight(rng) : kSoftWeightGene;
    }
  }
  if (cls == ConnectionClass::Hard) return detail::draw_hard_weight(rng, w);
  return w;
}

struct ConnectionGene {
  std::uint8_t c = 0;
  std::int8_t w = 0;
  friend bool operator==(const ConnectionGene&, const ConnectionGene&) = default;
};

/// Direct encoding: n*n (C, W) pairs, row-major over (postsynaptic, presynaptic).
/// W is carried on unconnected pairs too.
struct MatrixGenotype {
  int n = 0;
  std::vector<ConnectionGene> pairs;
  friend bool operator==(const MatrixGenotype&, const MatrixGenotype&) = default;

  std::size_t connection_count() const {
    return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [](ConnectionGene g) { return g.c != 0; }));
  }
};

inline MatrixGenotype random_matrix_genotype(int n, const GenotypeParams& params, Rng& rng) {
  check_neuron_count(n);
  MatrixGenotype g;
  g.n = n;
  g.pairs.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (ConnectionGene& pair : g.pairs) {
    pair.c = bernoulli(rng, params.p_conn) ? 1 : 0;
    pair.w = static_cast<std::int8_t>(sample_weight_gene(params, rng));
  }
  return g;
}

inline void validate(const MatrixGenotype& g) {
  check_neuron_count(g.n);
  if (g.pairs.size() != static_cast<std::size_t>(g.n) * static_cast<std::size_t>(g.n))
    throw std::invalid_argument("corrupt genotype: wrong pair count");
  for (const ConnectionGene& p : g.pairs)
    if (p.c > 1 || !is_legal_weight_gene(p.w)) throw std::invalid_argument("corrupt genotype");
}

inline Phenotype decode_matrix(const MatrixGenotype& g) {
  validate(g);
  Phenotype ph(g.n);
  for (int post = 0; post < g.n; ++post) {
    for (int pre = 0; pre < g.n; ++pre) {
      const ConnectionGene p = g.pairs[ph.index(post, pre)];
      if (p.c) ph.set(post, pre, weight_gene_class(p.w), p.w / 10.0);
    }
  }
  return ph;
}

/// Each pair mutates with probability pm. A type mutation flips C and moves W
/// to another connection category; otherwise W gets a within-category change.
inline MatrixGenotype mutate_matrix(MatrixGenotype g, double pm, double p_type, Rng& rng) {
  if (pm <= 0.0) return g;
  for (ConnectionGene& pair : g.pairs) {
    if (!bernoulli(rng, pm)) continue;
    if (bernoulli(rng, p_type)) {
      pair.c ^= 1;
      pair.w = static_cast<std::int8_t>(mutate_weight_gene(pair.w, 1.0, rng));
    } else {
      pair.w = static_cast<std::int8_t>(mutate_weight_gene(pair.w, 0.0, rng));
    }
  }
  return g;
}

/// k distinct cut points, uniform over [1, length-1], ascending.
inline std::vector<std::size_t> draw_cut_points(std::size_t length, int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("crossover needs at least one cut point");
  if (length < 2) return {};
  const std::size_t cuts = std::min<std::size_t>(static_cast<std::size_t>(k), length - 1);
  std::set<std::size_t> chosen;
  std::uniform_int_distribution<std::size_t> pick(1, length - 1);
  while (chosen.size() < cuts) chosen.insert(pick(rng));
  return {chosen.begin(), chosen.end()};
}

/// Alternating-segment recombination starting with `a`.
template <class T>
std::vector<T> splice_segments(std::span<const T> a, std::span<const T> b, std::span<const std::size_t> cuts) {
  std::vector<T> child(a.begin(), a.end());
  bool from_b = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    const std::size_t end = i < cuts.size() ? cuts[i] : a.size();
    if (from_b) std::copy(b.begin() + static_cast<std::ptrdiff_t>(start), b.begin() + static_cast<std::ptrdiff_t>(end),
                          child.begin() + static_cast<std::ptrdiff_t>(start));
    from_b = !from_b;
    start = end;
  }
  return child;
}

inline MatrixGenotype crossover_matrix_at(const MatrixGenotype& a, const MatrixGenotype& b, std::span<const std::size_t> cuts) {
  if (a.n != b.n || a.pairs.size() != b.pairs.size()) throw std::invalid_argument("crossover parents differ in size");
  MatrixGenotype child;
  child.n = a.n;
  child.pairs = splice_segments<ConnectionGene>(a.pairs, b.pairs, cuts);
  return child;
}

inline MatrixGenotype crossover_matrix(const MatrixGenotype& a, const MatrixGenotype& b, int k_points, Rng& rng) {
  if (a.n != b.n || a.pairs.size() != b.pairs.size()) throw std::invalid_argument("crossover parents differ in size");
  const auto cuts = draw_cut_points(a.pairs.size(), k_points, rng);
  return crossover_matrix_at(a, b, cuts);
}

// File format: "MATRIX n", then n rows of n "C:W" tokens.

inline std::string serialize_matrix(const MatrixGenotype& g) {
  std::string out = "MATRIX " + std::to_string(g.n) + "\n";
  out.reserve(out.size() + g.pairs.size() * 5);
  for (int row = 0; row < g.n; ++row) {
    for (int col = 0; col < g.n; ++col) {
      const ConnectionGene p = g.pairs[static_cast<std::size_t>(row) * static_cast<std::size_t>(g.n) + static_cast<std::size_t>(col)];
      if (col) out += ' ';
      out += std::to_string(p.c);
      out += ':';
      out += std::to_string(p.w);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

inline bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size() || s.size() - i > 9) return false;
  long v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = static_cast<int>(neg ? -v : v);
  return true;
}

}  // namespace detail

/// Parses serialize_matrix() output. `first_line` offsets reported line numbers
/// when the text is embedded in a larger file.
inline MatrixGenotype parse_matrix(std::string_view text, int first_line = 1) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError(first_line, "empty matrix genotype");
  const auto header = detail::split_ws(lines[0]);
  int n = 0;
  if (header.size() != 2 || header[0] != "MATRIX" || !detail::parse_int(header[1], n))
    throw ParseError(first_line, "expected 'MATRIX n'");
  if (n < kMinNeurons || !is_power_of_two(n)) throw ParseError(first_line, "neuron count must be a power of two >= 32");
  if (lines.size() < static_cast<std::size_t>(n) + 1)
    throw ParseError(first_line + static_cast<int>(lines.size()), "expected " + std::to_string(n) + " rows");
  for (std::size_t i = static_cast<std::size_t>(n) + 1; i < lines.size(); ++i)
    if (!detail::split_ws(lines[i]).empty()) throw ParseError(first_line + static_cast<int>(i), "unexpected content");

  MatrixGenotype g;
  g.n = n;
  g.pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int row = 0; row < n; ++row) {
    const int line_no = first_line + row + 1;
    const auto tokens = detail::split_ws(lines[static_cast<std::size_t>(row) + 1]);
    if (tokens.size() != static_cast<std::size_t>(n))
      throw ParseError(line_no, "expected " + std::to_string(n) + " pairs, got " + std::to_string(tokens.size()));
    for (std::size_t col = 0; col < tokens.size(); ++col) {
      const std::string_view tok = tokens[col];
      const std::size_t colon = tok.find(':');
      int c = 0, w = 0;
      if (colon == std::string_view::npos || !detail::parse_int(tok.substr(0, colon), c) ||
          !detail::parse_int(tok.substr(colon + 1), w))
        throw ParseError(line_no, "malformed pair '" + std::string(tok) + "' at column " + std::to_string(col + 1));
      if (c != 0 && c != 1) throw ParseError(line_no, "connection bit must be 0 or 1 at column " + std::to_string(col + 1));
      if (!is_legal_weight_gene(w))
        throw ParseError(line_no, "illegal weight " + std::to_string(w) + " at column " + std::to_string(col + 1));
      g.pairs.push_back({static_cast<std::uint8_t>(c), static_cast<std::int8_t>(w)});
    }
  }
  return g;
}

}  // namespace hebblsys
