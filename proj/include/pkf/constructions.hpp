#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pkf/circuits.hpp"
#include "pkf/graph.hpp"
#include "pkf/rng.hpp"

namespace pkf {

// Vertex-disjoint red edges set aside before tree growth. For an edge (u,v)
// with u < v, u is the tree-facing endpoint and v the linking endpoint.
struct ReservedEdges {
  std::vector<Edge> edges;
  std::size_t left_count{0};  // edges[0..left_count) form the left half
  bool partitioned{false};
  bool padded_down{false};  // requested size was odd and got reduced by one

  VertexId tree_facing(std::size_t i) const { return edges[i].u; }
  VertexId linking(std::size_t i) const { return edges[i].v; }
};

// Available vertices (never reserved, never in a tree) and full-branching
// vertices (available with every red neighbor still available). Only shrinks.
class AvailabilitySets {
 public:
  AvailabilitySets() = default;
  explicit AvailabilitySets(std::size_t n);

  bool is_available(VertexId v) const { return available_[v] != 0; }
  bool is_full_branching(VertexId v) const { return full_branching_[v] != 0; }
  void remove_available(VertexId v);
  void remove_full_branching(VertexId v);

  std::size_t available_count() const { return available_count_; }
  std::size_t full_branching_count() const { return full_branching_count_; }
  std::size_t full_branching_low_water() const { return full_branching_low_water_; }

  // Defining invariant: every full-branching vertex has all of its red
  // neighbors available.
  bool check_invariant(const BicoloredGraph& g) const;

 private:
  std::vector<std::uint8_t> available_, full_branching_;
  std::size_t available_count_{0}, full_branching_count_{0};
  std::size_t full_branching_low_water_{0};
};

// Greedy reservation of m vertex-disjoint red edges, scanning the planted
// edges in the order of a seed-determined vertex relabeling. When `forbidden`
// is given, that edge and every red edge sharing an endpoint with it are
// excluded from the pool. Throws ResourceError if fewer than m disjoint edges
// exist in the pool.
std::pair<ReservedEdges, AvailabilitySets> reserve_edges(
    const BicoloredGraph& g, std::size_t m, Rng& rng,
    std::optional<Edge> forbidden = std::nullopt);

struct TreeNode {
  VertexId vertex;
  std::int32_t parent;  // index into the side's node vector, -1 at the root
  EdgeColor tag;        // color of the edge to the parent; roots are tagged red
};

struct TreeSide {
  std::vector<TreeNode> nodes;
  std::vector<std::uint32_t> red_nodes;  // indices of red-tagged nodes

  std::size_t size() const { return nodes.size(); }
};

// Two alternating trees joined by a red root edge; paths from the roots
// alternate blue (odd layers) and red (even layers), and each blue vertex
// carries exactly k red children.
struct TwoSidedTree {
  Edge root_edge;
  TreeSide left, right;
};

struct BuildTreesResult {
  std::vector<TwoSidedTree> trees;  // kept trees: both sides reached 2*ell
  std::size_t attempted{0};
  bool exhausted{false};  // ran out of planted edges with both endpoints available
  std::size_t max_side_size{0};  // across all attempts, kept or not
};

// Breadth-first two-sided growth. Attempts up to K root edges; a tree is kept
// only when both sides reach at least 2*ell vertices. Each side holds at most
// 2*ell + k vertices and a kept side contains at least ell red vertices.
BuildTreesResult build_trees(const BicoloredGraph& g, int k, AvailabilitySets& avail,
                             std::size_t ell, std::size_t K, Rng& rng);

struct ConstructionParams {
  std::size_t ell{8};
  std::size_t d{3};
  double gamma{0.03};
  std::size_t max_cycles{10000};
  // 0 means derive the tree budget K = gamma*n / (2*(2*ell + k)*k), which
  // keeps the full-branching count above n - 5*gamma*n throughout.
  std::size_t tree_budget{0};
};

struct ConstructedCycles {
  std::vector<AlternatingCircuit> cycles;
  std::size_t reserved{0};
  bool padded_down{false};
  std::size_t attempted_trees{0};
  std::size_t kept_trees{0};
  std::size_t admitted_trees{0};
  std::size_t link_edges{0};  // blue edges of the auxiliary bipartite graph
  std::size_t full_branching_low_water{0};
  std::size_t max_side_size{0};
};

// Five-edge assembly: reserve 2*gamma*n/k red edges (padded down to even),
// grow two-sided trees, admit trees blue-connected to d unmarked tree-facing
// endpoints per side (marking them, so admitted trees have disjoint endpoint
// sets), join admitted trees through blue linking edges, enumerate the
// resulting auxiliary cycles and expand each into a concrete alternating
// cycle of g. Every returned cycle is validated: strictly alternating,
// simple, colors matching g, and XOR with the red set is again a k-factor.
ConstructedCycles construct_cycles(const BicoloredGraph& g, int k,
                                   const ConstructionParams& params, Rng& rng);

struct ThreeEdgeResult {
  std::optional<AlternatingCircuit> cycle;
  bool left_grown{false};
  bool right_grown{false};
  std::size_t reserved{0};
};

// Single-tree variant: reserve gamma*n red edges avoiding e and its red
// neighborhood, grow one two-sided tree rooted at e until each side holds
// 2*ell vertices (hence >= ell red vertices), then look for a reserved edge
// whose smaller endpoint sees the left side and larger endpoint sees the
// right side through blue edges. Dying sides are a regular outcome, not an
// error; the returned cycle, when present, passes through e.
ThreeEdgeResult three_edge_closure(const BicoloredGraph& g, int k, Edge e,
                                   std::size_t ell, double gamma, Rng& rng);

struct PaperPreset {
  double gamma;
  double ell;
  double d;
};

// Proof-strength parameter choices; astronomically large at any feasible n,
// kept computable for reference. Requires k*lambda > 1 and alpha >= 1.
PaperPreset paper_preset(int k, double lambda, double alpha);

}  // namespace pkf
