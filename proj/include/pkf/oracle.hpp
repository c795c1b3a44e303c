#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pkf/errors.hpp"
#include "pkf/graph.hpp"
#include "pkf/rational.hpp"
#include "pkf/rng.hpp"

namespace pkf {

struct OracleLimits {
  std::size_t max_n_matching{16};  // cap for k == 1
  std::size_t max_n_general{12};   // cap for k >= 2
  std::uint64_t node_budget{50'000'000};

  std::size_t cap_for(int k) const {
    return k == 1 ? max_n_matching : max_n_general;
  }
};

// Exhaustive, duplicate-free list of the k-factors contained in one graph.
struct FactorCatalog {
  std::size_t n{0};
  int k{1};
  std::vector<EdgeSet> factors;  // canonical order

  bool empty() const { return factors.empty(); }
  std::size_t size() const { return factors.size(); }
};

namespace detail {

// Backtracking core: completes vertices in increasing order, choosing each
// deficient vertex's remaining incident edges among higher-indexed partners.
// Calls `emit` once per k-factor with the chosen edges. Throws ResourceError
// when more than `node_budget` search nodes are expanded.
template <typename Emit>
void for_each_k_factor(std::size_t n, const std::vector<Edge>& edges, int k,
                       std::uint64_t node_budget, Emit&& emit) {
  // Adjacency restricted to higher-indexed partners, canonical order.
  std::vector<std::vector<VertexId>> up(n);
  for (const Edge& e : edges) {
    if (e.v >= n) throw std::invalid_argument("for_each_k_factor: endpoint out of range");
    up[e.u].push_back(e.v);
  }

  std::vector<int> deg(n, 0);
  std::vector<Edge> chosen;
  chosen.reserve(n * static_cast<std::size_t>(k) / 2);
  std::vector<VertexId> pick;  // scratch for the current vertex's partners
  std::uint64_t nodes = 0;

  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (++nodes > node_budget) {
      throw ResourceError("k-factor enumeration exceeded node budget");
    }
    std::size_t u = from;
    while (u < n && deg[u] == k) ++u;
    if (u == n) {
      emit(chosen);
      return;
    }
    const int need = k - deg[u];
    pick.clear();
    for (const VertexId w : up[u]) {
      if (deg[w] < k) pick.push_back(w);
    }
    if (static_cast<int>(pick.size()) < need) return;

    // Iterate combinations of `need` partners out of `pick` in lexicographic
    // order via index positions.
    std::vector<std::size_t> idx(static_cast<std::size_t>(need));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    const std::size_t csize = pick.size();
    for (;;) {
      for (const std::size_t i : idx) {
        const VertexId w = pick[i];
        chosen.emplace_back(static_cast<VertexId>(u), w);
        ++deg[w];
      }
      deg[u] = k;
      self(self, u + 1);
      deg[u] = k - need;
      for (const std::size_t i : idx) {
        --deg[pick[i]];
        chosen.pop_back();
      }
      // next combination
      std::size_t pos = idx.size();
      while (pos > 0) {
        --pos;
        if (idx[pos] + (idx.size() - pos) < csize) break;
        if (pos == 0) return;
      }
      if (idx[pos] + (idx.size() - pos) >= csize) return;
      ++idx[pos];
      for (std::size_t j = pos + 1; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
    }
  };
  rec(rec, 0);
}

}  // namespace detail

// Complete catalog of k-factors in g. Caps are hard errors, never silent
// truncation: a partial catalog would poison every downstream exact test.
FactorCatalog enumerate_k_factors(std::size_t n, const std::vector<Edge>& edges, int k,
                                  const OracleLimits& limits = {});
FactorCatalog enumerate_k_factors(const BicoloredGraph& g, int k,
                                  const OracleLimits& limits = {});

// Uniform draw; throws std::domain_error on an empty catalog.
const EdgeSet& posterior_sample(const FactorCatalog& catalog, Rng& rng);

struct OverlapHistogram {
  // by_overlap[l] counts factors with |H intersect H*| = l, l in [0, kn/2].
  std::vector<std::int64_t> by_overlap;
  // by_distance[t] counts factors with |H delta H*| = 2t.
  std::vector<std::int64_t> by_distance;
  std::int64_t total{0};
};

OverlapHistogram overlap_histogram(const FactorCatalog& catalog, const EdgeSet& h_star);

// (# Hamiltonian cycles of K_m) / (# 2-factors of K_m), by enumeration.
Ratio fraction_cycle_2factors(std::size_t m, const OracleLimits& limits = {});

}  // namespace pkf
