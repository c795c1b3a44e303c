#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pkf/rational.hpp"

namespace pkf {

using VertexId = std::uint32_t;

// Red marks planted edges, blue marks background-only edges.
enum class EdgeColor : std::uint8_t { Red = 0, Blue = 1 };

inline EdgeColor opposite(EdgeColor c) {
  return c == EdgeColor::Red ? EdgeColor::Blue : EdgeColor::Red;
}

// Undirected edge stored canonically with u < v. Self-loops are rejected at
// construction, so set algebra downstream never has orientation bugs.
struct Edge {
  VertexId u{0};
  VertexId v{0};

  Edge() = default;
  Edge(VertexId a, VertexId b);

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct ColoredEdge {
  Edge e;
  EdgeColor color{EdgeColor::Red};

  friend bool operator==(const ColoredEdge&, const ColoredEdge&) = default;
};

// Duplicate-free edge collection kept in canonical (sorted) order, so
// iteration is deterministic everywhere a seeded computation walks it.
class EdgeSet {
 public:
  EdgeSet() = default;

  // Sorts and removes duplicates.
  static EdgeSet from_unsorted(std::vector<Edge> edges);

  bool contains(Edge e) const;
  bool insert(Edge e);  // false if already present

  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  const std::vector<Edge>& edges() const { return edges_; }

  auto begin() const { return edges_.begin(); }
  auto end() const { return edges_.end(); }

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  std::vector<Edge> edges_;
};

EdgeSet symmetric_difference(const EdgeSet& a, const EdgeSet& b);
EdgeSet set_union(const EdgeSet& a, const EdgeSet& b);
EdgeSet set_difference(const EdgeSet& a, const EdgeSet& b);
EdgeSet set_intersection(const EdgeSet& a, const EdgeSet& b);

// |h_star Δ h_hat| / |h_star|, exact. Throws std::domain_error when h_star is
// empty. The value only becomes a double at reporting boundaries.
Ratio risk(const EdgeSet& h_star, const EdgeSet& h_hat);

// True iff every vertex in [0,n) has degree exactly k in `edges`.
bool is_k_factor(const EdgeSet& edges, std::size_t n, int k);

struct Arc {
  VertexId to;
  EdgeColor color;
};

// Observed graph with planted/background coloring and a CSR adjacency index.
// Immutable after construction; safe to share across trial workers.
class BicoloredGraph {
 public:
  BicoloredGraph(std::size_t n, EdgeSet red, EdgeSet blue);

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return red_.size() + blue_.size(); }

  const EdgeSet& red() const { return red_; }
  const EdgeSet& blue() const { return blue_; }

  // Arcs sorted by neighbor id.
  std::span<const Arc> neighbors(VertexId v) const;

  bool has_edge(Edge e) const;
  std::optional<EdgeColor> color_of(Edge e) const;

  // All edges, canonically ordered, colors dropped.
  std::vector<Edge> all_edges() const;

 private:
  std::size_t n_;
  EdgeSet red_;
  EdgeSet blue_;
  std::vector<std::uint32_t> adj_offsets_;
  std::vector<Arc> adj_arcs_;
};

// Edge-list text format: header "n\tk", then one "u\tv\tR|B" line per edge in
// canonical order. write(read(text)) and read(write(g)) are byte-exact.
void write_edge_list(std::ostream& os, const BicoloredGraph& g, int k);

struct EdgeListFile {
  BicoloredGraph graph;
  int k;
};

EdgeListFile read_edge_list(std::istream& is);

void save_edge_list(const std::string& path, const BicoloredGraph& g, int k);
EdgeListFile load_edge_list(const std::string& path);

}  // namespace pkf
