#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cfpr {

using Vertex = std::uint32_t;

struct Edge {
  Vertex from = 0;
  Vertex to = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Simple directed graph on vertices 0..n-1: no loops, no multi-edges.
///
/// Membership, insertion and deletion are O(1) expected through a hash index
/// on the ordered pair; out- and in-neighbour lists are both kept.
class DiGraph {
 public:
  DiGraph() = default;
  explicit DiGraph(std::size_t n_vertices);

  std::size_t size() const noexcept { return out_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool has_edge(Vertex from, Vertex to) const;
  /// Returns false if the edge was already present. Throws on loops or bad ids.
  bool add_edge(Vertex from, Vertex to);
  /// Returns false if the edge was absent.
  bool remove_edge(Vertex from, Vertex to);

  std::span<const Vertex> out_neighbors(Vertex v) const { return out_.at(v); }
  std::span<const Vertex> in_neighbors(Vertex v) const { return in_.at(v); }

  /// Edges in internal (insertion/removal dependent) order.
  std::span<const Edge> edges() const noexcept { return edges_; }
  /// Edges in lexicographic order; use for comparisons and output.
  std::vector<Edge> sorted_edges() const;

  friend bool operator==(const DiGraph& a, const DiGraph& b);

 private:
  static std::uint64_t key(Vertex from, Vertex to) noexcept {
    return (static_cast<std::uint64_t>(from) << 32) | to;
  }
  void check_vertex(Vertex v) const;

  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

DiGraph complete_digraph(std::size_t n);

struct DyadCensus {
  std::uint64_t mutual = 0;
  std::uint64_t asym = 0;
  std::uint64_t null = 0;

  std::uint64_t total() const noexcept { return mutual + asym + null; }
  bool operator==(const DyadCensus&) const = default;
};

/// Davis-Leinhardt (MAN) ordering of the 16 directed triad classes.
inline constexpr std::array<std::string_view, 16> kTriadNames = {
    "003",  "012",  "102",  "021D", "021U", "021C", "111D", "111U",
    "030T", "030C", "201",  "120D", "120U", "120C", "210",  "300"};

struct TriadCensus {
  std::array<std::uint64_t, 16> counts{};

  std::uint64_t total() const noexcept;
  std::uint64_t operator[](std::size_t k) const { return counts.at(k); }
  bool operator==(const TriadCensus&) const = default;
};

struct SuffStats {
  std::uint64_t edges = 0;    // t_e
  std::uint64_t mutuals = 0;  // t_m
  bool operator==(const SuffStats&) const = default;
};

DyadCensus dyad_census(const DiGraph& g);

/// Edge-scan triad census (Batagelj & Mrvar); O(m * max degree). Requires N >= 3.
TriadCensus triad_census(const DiGraph& g);

/// Exhaustive O(N^3) census, classifying each triple structurally.
/// Kept as an independent check on triad_census.
TriadCensus triad_census_exhaustive(const DiGraph& g);

SuffStats suff_stats(const DiGraph& g);

/// Probability that a uniformly chosen edge is reciprocated, 2 t_m / t_e.
/// Empty graphs have no defined value and yield std::nullopt.
std::optional<double> edgewise_reciprocity(const DiGraph& g);

/// t_e / N; equals both the mean in- and the mean out-degree.
double mean_degree(const DiGraph& g);

/// Density t_e / (N (N - 1)).
double density(const DiGraph& g);

std::uint64_t dyad_count(std::uint64_t n) noexcept;
std::uint64_t triple_count(std::uint64_t n) noexcept;

/// Edge-list text format: a header line `N <n>`, then one `i j` line per edge.
void write_edge_list(std::ostream& os, const DiGraph& g);
/// Parses the edge-list format. Blank lines, `#` comments and `focus` lines
/// are skipped. Throws std::runtime_error naming the offending line.
DiGraph read_edge_list(std::istream& is);

}  // namespace cfpr
