#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pkf/graph.hpp"

namespace pkf {

// Closed walk whose edges strictly alternate red/blue, wrap-around included.
// Vertices may repeat; edge i runs from verts[i] to verts[(i+1) % length].
struct AlternatingCircuit {
  std::vector<VertexId> verts;
  std::vector<EdgeColor> colors;

  std::size_t length() const { return verts.size(); }
  Edge edge_at(std::size_t i) const;
  std::vector<ColoredEdge> colored_edges() const;
  EdgeSet edge_set() const;  // distinct edges

  // Checks even length >= min_len, shared endpoints, strict alternation
  // including the wrap. Throws ContractError with a reason.
  void validate(std::size_t min_len = 4) const;

  bool is_simple() const;  // no repeated vertices
};

// Colored symmetric difference of two factors: edges of h_star \ h are red,
// edges of h \ h_star are blue.
std::vector<ColoredEdge> color_difference(const EdgeSet& h, const EdgeSet& h_star);

// Splits a balanced bicolored edge multiset into edge-disjoint alternating
// circuits by an alternating walk that closes as soon as it returns to its
// start compatibly. Deterministic for a fixed input ordering. Throws
// std::invalid_argument naming the first vertex whose red and blue degrees
// differ.
std::vector<AlternatingCircuit> decompose(const std::vector<ColoredEdge>& diff);

// h XOR edges(c). Requires membership of c's edges relative to h to alternate
// around the circuit; checks the result is again a k-factor.
EdgeSet xor_circuit(const EdgeSet& h, const AlternatingCircuit& c);

// Exhaustive search for a red-blue-red-blue 4-cycle; first hit in canonical
// scan order, or nullopt.
std::optional<AlternatingCircuit> find_alternating_4cycle(const BicoloredGraph& g);

// True iff g contains a simple cycle whose junction colors alternate at every
// vertex except at most one. Detected as a closed walk that alternates at all
// internal junctions (the break, if any, rotated to the wrap): such a walk
// exists iff a simple almost-alternating cycle does. Per start vertex this is
// a reachability pass over (vertex, last-color) states, so O(n * |E|) overall.
// Throws ResourceError when n exceeds n_cap.
bool has_almost_alternating_cycle(const BicoloredGraph& g, std::size_t n_cap = 200);

// Bounded DFS over simple alternating paths: is the planted edge e on some
// fully alternating simple cycle of g? May return false on a budget hit, never
// a false positive.
bool on_alternating_cycle(const BicoloredGraph& g, Edge e,
                          std::size_t node_budget = 200000);

struct AlternatingNeighborhood {
  std::vector<ColoredEdge> edges;     // includes the root edge
  std::vector<VertexId> boundary;     // shortest alternating distance == t
};

// Union of all alternating walks of length <= t leaving the planted edge e
// (first step blue), plus the depth-t boundary. e must be red in g.
AlternatingNeighborhood alternating_neighborhood(const BicoloredGraph& g, Edge e,
                                                 std::size_t t);

struct EnumerationBound {
  double log_value;  // natural log of C(kn/2, t) * (2t-1)!!
  std::optional<boost::multiprecision::cpp_int> exact;  // when kn/2 <= 64
};

// Counting bound for factors at symmetric-difference distance 2t: select t of
// the kn/2 planted edges and pair their 2t endpoints.
EnumerationBound enumeration_bound(std::size_t n, int k, std::uint64_t t);

}  // namespace pkf
