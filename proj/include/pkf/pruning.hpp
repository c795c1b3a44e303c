#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pkf/graph.hpp"

namespace pkf {

struct PruneStats {
  std::size_t fired_vertices{0};
  std::size_t planted_fires{0};
  std::size_t unplanted_fires{0};
  std::size_t peak_queue{0};
  // Saturating-decrement events; stays 0 on any instance of the planted model.
  std::size_t capacity_underflows{0};
};

enum class EdgeFate : std::uint8_t { Planted, Unplanted, Core };

struct RawPruneResult {
  std::vector<EdgeFate> fate;  // parallel to the input edge list
  PruneStats stats;
};

// Capacity-driven peeling on an uncolored view. Every vertex starts with
// capacity k (its number of unidentified planted incidences). A vertex whose
// degree equals its capacity has only planted edges left: classify them,
// remove the vertex, and decrement its neighbors' capacities. A vertex whose
// capacity reaches zero has only unplanted edges left: classify and remove.
// Runs until no rule applies. A FIFO worklist enqueues each vertex at most
// once per rule kind with a validity re-check at pop, so total work is
// O(n + |E|). When both rules hold at once the capacity-zero rule wins.
//
// This function deliberately takes no colors; the colored wrapper below
// re-attaches them afterwards for analysis.
RawPruneResult iterative_prune_raw(std::size_t n, const std::vector<Edge>& edges, int k);

struct PruningOutcome {
  EdgeSet identified_planted;   // the estimator's output
  EdgeSet removed_unplanted;
  BicoloredGraph core;          // residual graph, colors retained for analysis only
  PruneStats stats;
};

// identified_planted, removed_unplanted and core partition g's edges.
PruningOutcome iterative_prune(const BicoloredGraph& g, int k);

// Edges with at least one endpoint of degree exactly k; coincides with what
// the first pruning round classifies as planted.
EdgeSet degree_estimator(std::size_t n, const std::vector<Edge>& edges, int k);
EdgeSet degree_estimator(const BicoloredGraph& g, int k);

// |{e in h_star : e in core}| / |h_star|, exact.
Ratio core_planted_fraction(const PruningOutcome& outcome, const EdgeSet& h_star);

}  // namespace pkf
