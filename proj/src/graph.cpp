#include "cfpr/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace cfpr {

DiGraph::DiGraph(std::size_t n_vertices) : out_(n_vertices), in_(n_vertices) {}

void DiGraph::check_vertex(Vertex v) const {
  if (v >= out_.size()) {
    throw std::out_of_range(fmt::format("vertex {} out of range for graph of order {}", v, out_.size()));
  }
}

bool DiGraph::has_edge(Vertex from, Vertex to) const { return index_.contains(key(from, to)); }

bool DiGraph::add_edge(Vertex from, Vertex to) {
  check_vertex(from);
  check_vertex(to);
  if (from == to) throw std::invalid_argument(fmt::format("self-loop ({0},{0}) not allowed", from));
  auto [it, inserted] = index_.try_emplace(key(from, to), edges_.size());
  if (!inserted) return false;
  edges_.push_back({from, to});
  out_[from].push_back(to);
  in_[to].push_back(from);
  return true;
}

namespace {
void erase_value(std::vector<Vertex>& v, Vertex x) {
  auto it = std::find(v.begin(), v.end(), x);
  *it = v.back();
  v.pop_back();
}
}  // namespace

bool DiGraph::remove_edge(Vertex from, Vertex to) {
  auto it = index_.find(key(from, to));
  if (it == index_.end()) return false;
  const std::size_t pos = it->second;
  index_.erase(it);
  if (pos + 1 != edges_.size()) {
    edges_[pos] = edges_.back();
    index_[key(edges_[pos].from, edges_[pos].to)] = pos;
  }
  edges_.pop_back();
  erase_value(out_[from], to);
  erase_value(in_[to], from);
  return true;
}

std::vector<Edge> DiGraph::sorted_edges() const {
  std::vector<Edge> e(edges_.begin(), edges_.end());
  std::sort(e.begin(), e.end());
  return e;
}

bool operator==(const DiGraph& a, const DiGraph& b) {
  return a.size() == b.size() && a.edge_count() == b.edge_count() &&
         std::all_of(a.edges_.begin(), a.edges_.end(),
                     [&](const Edge& e) { return b.has_edge(e.from, e.to); });
}

DiGraph complete_digraph(std::size_t n) {
  DiGraph g(n);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = 0; j < n; ++j)
      if (i != j) g.add_edge(i, j);
  return g;
}

std::uint64_t TriadCensus::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::uint64_t dyad_count(std::uint64_t n) noexcept { return n < 2 ? 0 : n * (n - 1) / 2; }

std::uint64_t triple_count(std::uint64_t n) noexcept {
  return n < 3 ? 0 : n * (n - 1) / 2 * (n - 2) / 3;
}

DyadCensus dyad_census(const DiGraph& g) {
  DyadCensus c;
  for (const Edge& e : g.edges()) {
    if (g.has_edge(e.to, e.from))
      ++c.mutual;
    else
      ++c.asym;
  }
  c.mutual /= 2;
  c.null = dyad_count(g.size()) - c.mutual - c.asym;
  return c;
}

SuffStats suff_stats(const DiGraph& g) {
  return {g.edge_count(), dyad_census(g).mutual};
}

std::optional<double> edgewise_reciprocity(const DiGraph& g) {
  const SuffStats s = suff_stats(g);
  if (s.edges == 0) return std::nullopt;
  return 2.0 * static_cast<double>(s.mutuals) / static_cast<double>(s.edges);
}

double mean_degree(const DiGraph& g) {
  if (g.size() == 0) throw std::invalid_argument("mean degree of an empty vertex set");
  return static_cast<double>(g.edge_count()) / static_cast<double>(g.size());
}

double density(const DiGraph& g) {
  if (g.size() < 2) throw std::invalid_argument("density needs at least two vertices");
  return static_cast<double>(g.edge_count()) / (static_cast<double>(g.size()) * (g.size() - 1));
}

// ---------------------------------------------------------------------------
// Triad census

namespace {

// Class index (into kTriadNames) for each 6-bit triad code, where for a
// triple (v, u, w) bit 0 = v->u, 1 = u->v, 2 = v->w, 3 = w->v, 4 = u->w, 5 = w->u.
constexpr std::array<std::uint8_t, 64> kCodeToClass = {
    0, 1, 1, 2, 1, 3,  5,  7,  1, 5,  4,  6,  2,  7,  6,  10, 1, 5,  3,  7,  4,  8,
    8, 12, 5, 9, 8, 13, 6, 13, 11, 14, 1, 4, 5, 6, 5, 8, 9, 13, 3, 8, 8, 11, 7, 12,
    13, 14, 2, 6, 7, 10, 6, 11, 13, 14, 7, 13, 12, 14, 10, 14, 14, 15};

int triad_code(const DiGraph& g, Vertex v, Vertex u, Vertex w) {
  return (g.has_edge(v, u) ? 1 : 0) | (g.has_edge(u, v) ? 2 : 0) | (g.has_edge(v, w) ? 4 : 0) |
         (g.has_edge(w, v) ? 8 : 0) | (g.has_edge(u, w) ? 16 : 0) | (g.has_edge(w, u) ? 32 : 0);
}

std::vector<std::vector<Vertex>> undirected_neighbors(const DiGraph& g) {
  std::vector<std::vector<Vertex>> nbrs(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    auto& n = nbrs[v];
    n.assign(g.out_neighbors(v).begin(), g.out_neighbors(v).end());
    n.insert(n.end(), g.in_neighbors(v).begin(), g.in_neighbors(v).end());
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return nbrs;
}

}  // namespace

TriadCensus triad_census(const DiGraph& g) {
  const std::size_t n = g.size();
  if (n < 3) throw std::invalid_argument(fmt::format("triad census needs N >= 3, got {}", n));
  const auto nbrs = undirected_neighbors(g);
  TriadCensus census;
  std::vector<Vertex> joint;
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex u : nbrs[v]) {
      if (u <= v) continue;
      joint.clear();
      std::set_union(nbrs[v].begin(), nbrs[v].end(), nbrs[u].begin(), nbrs[u].end(),
                     std::back_inserter(joint));
      // joint contains u and v themselves
      const std::uint64_t third_parties = joint.size() - 2;
      const bool mutual = g.has_edge(v, u) && g.has_edge(u, v);
      census.counts[mutual ? 2 : 1] += n - third_parties - 2;
      for (Vertex w : joint) {
        if (w == u || w == v) continue;
        const bool w_adjacent_v = std::binary_search(nbrs[v].begin(), nbrs[v].end(), w);
        if (u < w || (v < w && w < u && !w_adjacent_v)) {
          ++census.counts[kCodeToClass[triad_code(g, v, u, w)]];
        }
      }
    }
  }
  std::uint64_t non_empty = 0;
  for (std::size_t k = 1; k < 16; ++k) non_empty += census.counts[k];
  census.counts[0] = triple_count(n) - non_empty;
  return census;
}

namespace {

// Structural classification of one triple from its arcs, independent of the
// code table above.
std::size_t classify_triple(const DiGraph& g, Vertex a, Vertex b, Vertex c) {
  const std::array<Vertex, 3> t = {a, b, c};
  auto arc = [&](int i, int j) { return g.has_edge(t[i], t[j]); };
  int mutual = 0, asym = 0;
  // dyads {0,1}, {0,2}, {1,2}
  constexpr std::array<std::array<int, 2>, 3> dyads = {{{0, 1}, {0, 2}, {1, 2}}};
  std::array<int, 3> kind{};  // 0 null, 1 asym, 2 mutual
  for (int d = 0; d < 3; ++d) {
    const bool x = arc(dyads[d][0], dyads[d][1]);
    const bool y = arc(dyads[d][1], dyads[d][0]);
    kind[d] = (x && y) ? 2 : (x || y) ? 1 : 0;
    mutual += kind[d] == 2;
    asym += kind[d] == 1;
  }
  std::array<int, 3> outdeg{}, indeg{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j && arc(i, j)) {
        ++outdeg[i];
        ++indeg[j];
      }
  const int null = 3 - mutual - asym;
  // vertex not touched by dyad d
  auto opposite = [&](int d) { return 3 - dyads[d][0] - dyads[d][1]; };
  auto find_kind = [&](int k) {
    for (int d = 0; d < 3; ++d)
      if (kind[d] == k) return d;
    return -1;
  };

  if (mutual == 0 && asym == 0) return 0;                  // 003
  if (mutual == 0 && asym == 1) return 1;                  // 012
  if (mutual == 1 && asym == 0 && null == 2) return 2;     // 102
  if (mutual == 0 && asym == 2) {                          // 021
    const int hub = opposite(find_kind(0));                // shared by both arcs
    if (outdeg[hub] == 2) return 3;                        // D
    if (indeg[hub] == 2) return 4;                         // U
    return 5;                                              // C
  }
  if (mutual == 1 && asym == 1) {                          // 111
    const int isolated_side = opposite(find_kind(0));      // the vertex in both non-null dyads
    // asym arc points into the mutual pair member -> D, out of it -> U
    const int a_dyad = find_kind(1);
    const int other = dyads[a_dyad][0] == isolated_side ? dyads[a_dyad][1] : dyads[a_dyad][0];
    return arc(other, isolated_side) ? 6 : 7;
  }
  if (mutual == 0 && asym == 3) {                          // 030
    for (int i = 0; i < 3; ++i)
      if (outdeg[i] == 2) return 8;                        // T
    return 9;                                              // C
  }
  if (mutual == 2 && asym == 0) return 10;                 // 201
  if (mutual == 1 && asym == 2) {                          // 120
    const int apex = opposite(find_kind(2));
    if (outdeg[apex] == 2 && indeg[apex] == 0) return 11;  // D
    if (indeg[apex] == 2 && outdeg[apex] == 0) return 12;      // U
    return 13;                                                 // C
  }
  if (mutual == 2 && asym == 1) return 14;                 // 210
  return 15;                                               // 300
}

}  // namespace

TriadCensus triad_census_exhaustive(const DiGraph& g) {
  const std::size_t n = g.size();
  if (n < 3) throw std::invalid_argument(fmt::format("triad census needs N >= 3, got {}", n));
  TriadCensus census;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      for (Vertex c = b + 1; c < n; ++c) ++census.counts[classify_triple(g, a, b, c)];
  return census;
}

// ---------------------------------------------------------------------------
// Edge-list IO

void write_edge_list(std::ostream& os, const DiGraph& g) {
  os << "N " << g.size() << '\n';
  for (const Edge& e : g.sorted_edges()) os << e.from << ' ' << e.to << '\n';
}

DiGraph read_edge_list(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<DiGraph> g;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (!g) {
      std::string tag;
      long long n = -1;
      if (!(fields >> tag >> n) || tag != "N" || n < 1) {
        throw std::runtime_error(fmt::format("line {}: expected header `N <n>`", line_no));
      }
      g.emplace(static_cast<std::size_t>(n));
      continue;
    }
    if (line.compare(first, 5, "focus") == 0) continue;
    long long i = -1, j = -1;
    std::string rest;
    if (!(fields >> i >> j) || (fields >> rest)) {
      throw std::runtime_error(fmt::format("line {}: expected `i j`", line_no));
    }
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= g->size() ||
        static_cast<std::size_t>(j) >= g->size() || i == j) {
      throw std::runtime_error(fmt::format("line {}: invalid edge ({}, {})", line_no, i, j));
    }
    g->add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
  }
  if (!g) throw std::runtime_error("edge list is missing the `N <n>` header");
  return std::move(*g);
}

}  // namespace cfpr
