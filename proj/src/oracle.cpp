#include "pkf/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace pkf {

namespace {

void check_caps(std::size_t n, int k, const OracleLimits& limits) {
  if (k < 1) throw std::domain_error("oracle: k must be >= 1");
  const std::size_t cap = limits.cap_for(k);
  if (n > cap) {
    throw ResourceError("oracle: n = " + std::to_string(n) + " exceeds cap " +
                        std::to_string(cap) + " for k = " + std::to_string(k));
  }
}

}  // namespace

FactorCatalog enumerate_k_factors(std::size_t n, const std::vector<Edge>& edges, int k,
                                  const OracleLimits& limits) {
  check_caps(n, k, limits);
  FactorCatalog catalog;
  catalog.n = n;
  catalog.k = k;
  detail::for_each_k_factor(n, edges, k, limits.node_budget,
                            [&](const std::vector<Edge>& chosen) {
                              catalog.factors.push_back(EdgeSet::from_unsorted(chosen));
                            });
  std::sort(catalog.factors.begin(), catalog.factors.end(),
            [](const EdgeSet& a, const EdgeSet& b) { return a.edges() < b.edges(); });
  catalog.factors.erase(std::unique(catalog.factors.begin(), catalog.factors.end()),
                        catalog.factors.end());
  return catalog;
}

FactorCatalog enumerate_k_factors(const BicoloredGraph& g, int k,
                                  const OracleLimits& limits) {
  return enumerate_k_factors(g.vertex_count(), g.all_edges(), k, limits);
}

const EdgeSet& posterior_sample(const FactorCatalog& catalog, Rng& rng) {
  if (catalog.empty()) {
    throw std::domain_error("posterior_sample: graph contains no k-factor");
  }
  return catalog.factors[rng.below(catalog.size())];
}

OverlapHistogram overlap_histogram(const FactorCatalog& catalog, const EdgeSet& h_star) {
  const std::size_t half = catalog.n * static_cast<std::size_t>(catalog.k) / 2;
  if (h_star.size() != half) {
    throw std::domain_error("overlap_histogram: reference factor has wrong size");
  }
  OverlapHistogram h;
  h.by_overlap.assign(half + 1, 0);
  h.by_distance.assign(half + 1, 0);
  for (const EdgeSet& f : catalog.factors) {
    const std::size_t overlap = set_intersection(f, h_star).size();
    ++h.by_overlap[overlap];
    ++h.by_distance[half - overlap];
    ++h.total;
  }
  return h;
}

Ratio fraction_cycle_2factors(std::size_t m, const OracleLimits& limits) {
  check_caps(m, 2, limits);
  if (m < 3) throw std::domain_error("fraction_cycle_2factors: need m >= 3");
  std::vector<Edge> complete;
  complete.reserve(m * (m - 1) / 2);
  for (VertexId u = 0; u + 1 < m; ++u) {
    for (VertexId v = u + 1; v < m; ++v) complete.emplace_back(u, v);
  }
  std::int64_t total = 0;
  std::int64_t cycles = 0;
  std::vector<VertexId> other(2 * m);  // the two 2-factor neighbors per vertex
  detail::for_each_k_factor(
      m, complete, 2, limits.node_budget, [&](const std::vector<Edge>& chosen) {
        ++total;
        // A 2-factor is one Hamiltonian cycle iff walking from vertex 0
        // traverses all m vertices.
        std::vector<int> fill(m, 0);
        for (const Edge& e : chosen) {
          other[2 * e.u + fill[e.u]++] = e.v;
          other[2 * e.v + fill[e.v]++] = e.u;
        }
        VertexId prev = 0;
        VertexId cur = other[0];
        std::size_t steps = 1;
        while (cur != 0) {
          const VertexId a = other[2 * cur];
          const VertexId b = other[2 * cur + 1];
          const VertexId nxt = a == prev ? b : a;
          prev = cur;
          cur = nxt;
          ++steps;
        }
        if (steps == m) ++cycles;
      });
  return Ratio(cycles, total);
}

}  // namespace pkf
