#pragma once

// Shared helpers and independent oracles for the test suites. Everything here
// must stay independent of the library code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "pkf/graph.hpp"

namespace testsupport {

inline pkf::BicoloredGraph make_graph(std::size_t n,
                                      std::vector<pkf::Edge> red,
                                      std::vector<pkf::Edge> blue) {
  return pkf::BicoloredGraph(n, pkf::EdgeSet::from_unsorted(std::move(red)),
                             pkf::EdgeSet::from_unsorted(std::move(blue)));
}

inline pkf::Edge e(pkf::VertexId a, pkf::VertexId b) { return pkf::Edge(a, b); }

// Upper-tail p-value of a chi-square statistic.
inline double chi_square_pvalue(double stat, double dof) {
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Chi-square test of uniformity over `cells` observed counts.
inline double uniformity_pvalue(const std::vector<std::int64_t>& counts) {
  std::int64_t total = 0;
  for (const auto c : counts) total += c;
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (const auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return chi_square_pvalue(stat, static_cast<double>(counts.size() - 1));
}

// Independent root finder for x = exp(-lambda*(1 - x^k)) on [0, 0.999999999]:
// plain bisection on the sign of exp(...) - x, 200 halvings.
inline double bisection_rho(double lambda, int k) {
  auto g = [&](double x) {
    double xk = 1.0;
    for (int i = 0; i < k; ++i) xk *= x;
    return std::exp(-lambda * (1.0 - xk)) - x;
  };
  double lo = 0.0, hi = 0.999999999;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Brute-force almost-alternating-cycle detector: enumerates simple cycles by
// DFS (deduplicated by smallest vertex) and counts same-color junctions.
inline bool brute_force_almost_alternating(const pkf::BicoloredGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<pkf::VertexId> path;
  std::vector<std::uint8_t> on_path(n, 0);

  std::function<bool(pkf::VertexId, pkf::VertexId)> dfs =
      [&](pkf::VertexId start, pkf::VertexId cur) -> bool {
    for (const pkf::Arc& arc : g.neighbors(cur)) {
      if (arc.to == start && path.size() >= 3) {
        std::size_t bad = 0;
        for (std::size_t i = 0; i < path.size(); ++i) {
          const auto c1 = *g.color_of(pkf::Edge(path[i], path[(i + 1) % path.size()]));
          const auto c2 = *g.color_of(
              pkf::Edge(path[(i + 1) % path.size()], path[(i + 2) % path.size()]));
          if (c1 == c2) ++bad;
        }
        if (bad <= 1) return true;
      }
      if (arc.to > start && !on_path[arc.to]) {
        on_path[arc.to] = 1;
        path.push_back(arc.to);
        if (dfs(start, arc.to)) return true;
        path.pop_back();
        on_path[arc.to] = 0;
      }
    }
    return false;
  };

  for (std::size_t s = 0; s < n; ++s) {
    path.assign(1, static_cast<pkf::VertexId>(s));
    std::fill(on_path.begin(), on_path.end(), 0);
    on_path[s] = 1;
    if (dfs(static_cast<pkf::VertexId>(s), static_cast<pkf::VertexId>(s))) return true;
  }
  return false;
}

// Brute-force k-factor finder: tries every size-(nk/2) subset of the edge
// list. Only usable for very small inputs; that is the point.
inline std::vector<pkf::EdgeSet> brute_force_k_factors(std::size_t n,
                                                       const std::vector<pkf::Edge>& edges,
                                                       int k) {
  std::vector<pkf::EdgeSet> found;
  const std::size_t want = n * static_cast<std::size_t>(k) / 2;
  if (want > edges.size()) return found;
  std::vector<std::size_t> idx(want);
  for (std::size_t i = 0; i < want; ++i) idx[i] = i;
  for (;;) {
    std::vector<pkf::Edge> subset;
    for (const std::size_t i : idx) subset.push_back(edges[i]);
    pkf::EdgeSet candidate = pkf::EdgeSet::from_unsorted(std::move(subset));
    if (pkf::is_k_factor(candidate, n, k)) found.push_back(candidate);
    // next combination
    std::size_t pos = want;
    bool done = true;
    while (pos > 0) {
      --pos;
      if (idx[pos] + (want - pos) < edges.size()) {
        done = false;
        break;
      }
    }
    if (done) break;
    ++idx[pos];
    for (std::size_t j = pos + 1; j < want; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(found.begin(), found.end(),
            [](const pkf::EdgeSet& a, const pkf::EdgeSet& b) { return a.edges() < b.edges(); });
  return found;
}

}  // namespace testsupport
