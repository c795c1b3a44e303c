#include "pkf/pruning.hpp"

#include <deque>
#include <stdexcept>
#include <utility>

namespace pkf {

namespace {

enum class Trigger : std::uint8_t { Planted, Unplanted };

struct HalfEdge {
  VertexId to;
  std::uint32_t edge_id;
};

}  // namespace

RawPruneResult iterative_prune_raw(std::size_t n, const std::vector<Edge>& edges, int k) {
  if (k < 1) throw std::domain_error("iterative_prune: k must be >= 1");

  RawPruneResult res;
  res.fate.assign(edges.size(), EdgeFate::Core);
  if (n == 0) return res;

  // CSR over half-edges.
  std::vector<std::uint32_t> offset(n + 1, 0);
  for (const Edge& e : edges) {
    if (e.v >= n) throw std::invalid_argument("iterative_prune: endpoint out of range");
    ++offset[e.u + 1];
    ++offset[e.v + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offset[v + 1] += offset[v];
  std::vector<HalfEdge> half(offset[n]);
  {
    std::vector<std::uint32_t> cur(offset.begin(), offset.end() - 1);
    for (std::uint32_t id = 0; id < edges.size(); ++id) {
      const Edge& e = edges[id];
      half[cur[e.u]++] = HalfEdge{e.v, id};
      half[cur[e.v]++] = HalfEdge{e.u, id};
    }
  }

  std::vector<std::uint32_t> degree(n);
  std::vector<std::uint32_t> capacity(n, static_cast<std::uint32_t>(k));
  for (std::size_t v = 0; v < n; ++v) degree[v] = offset[v + 1] - offset[v];

  std::vector<std::uint8_t> vertex_alive(n, 1);
  std::vector<std::uint8_t> edge_alive(edges.size(), 1);
  std::vector<std::uint8_t> queued_planted(n, 0), queued_unplanted(n, 0);

  std::deque<std::pair<VertexId, Trigger>> queue;
  auto enqueue = [&](VertexId v) {
    if (capacity[v] == 0 && !queued_unplanted[v]) {
      queued_unplanted[v] = 1;
      queue.emplace_back(v, Trigger::Unplanted);
    } else if (capacity[v] > 0 && degree[v] == capacity[v] && !queued_planted[v]) {
      queued_planted[v] = 1;
      queue.emplace_back(v, Trigger::Planted);
    }
    res.stats.peak_queue = std::max(res.stats.peak_queue, queue.size());
  };

  for (std::size_t v = 0; v < n; ++v) enqueue(static_cast<VertexId>(v));

  auto remove_vertex = [&](VertexId v, EdgeFate fate) {
    vertex_alive[v] = 0;
    const bool planted = fate == EdgeFate::Planted;
    for (std::uint32_t i = offset[v]; i < offset[v + 1]; ++i) {
      const HalfEdge he = half[i];
      if (!edge_alive[he.edge_id]) continue;
      edge_alive[he.edge_id] = 0;
      res.fate[he.edge_id] = fate;
      const VertexId w = he.to;
      --degree[w];
      if (planted) {
        if (capacity[w] > 0) {
          --capacity[w];
        } else {
          ++res.stats.capacity_underflows;
        }
      }
      if (vertex_alive[w]) enqueue(w);
    }
  };

  while (!queue.empty()) {
    const auto [v, trig] = queue.front();
    queue.pop_front();
    if (!vertex_alive[v]) continue;
    if (trig == Trigger::Unplanted) {
      if (capacity[v] != 0) continue;  // stale entry
      ++res.stats.fired_vertices;
      ++res.stats.unplanted_fires;
      remove_vertex(v, EdgeFate::Unplanted);
    } else {
      if (capacity[v] == 0 || degree[v] != capacity[v]) continue;  // stale or superseded
      ++res.stats.fired_vertices;
      ++res.stats.planted_fires;
      remove_vertex(v, EdgeFate::Planted);
    }
  }
  return res;
}

PruningOutcome iterative_prune(const BicoloredGraph& g, int k) {
  const std::vector<Edge> edges = g.all_edges();
  RawPruneResult raw = iterative_prune_raw(g.vertex_count(), edges, k);

  std::vector<Edge> planted, unplanted, core_red, core_blue;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    switch (raw.fate[i]) {
      case EdgeFate::Planted:
        planted.push_back(edges[i]);
        break;
      case EdgeFate::Unplanted:
        unplanted.push_back(edges[i]);
        break;
      case EdgeFate::Core:
        if (g.red().contains(edges[i])) {
          core_red.push_back(edges[i]);
        } else {
          core_blue.push_back(edges[i]);
        }
        break;
    }
  }
  return PruningOutcome{
      EdgeSet::from_unsorted(std::move(planted)),
      EdgeSet::from_unsorted(std::move(unplanted)),
      BicoloredGraph(g.vertex_count(), EdgeSet::from_unsorted(std::move(core_red)),
                     EdgeSet::from_unsorted(std::move(core_blue))),
      raw.stats};
}

EdgeSet degree_estimator(std::size_t n, const std::vector<Edge>& edges, int k) {
  std::vector<std::uint32_t> degree(n, 0);
  for (const Edge& e : edges) {
    if (e.v >= n) throw std::invalid_argument("degree_estimator: endpoint out of range");
    ++degree[e.u];
    ++degree[e.v];
  }
  std::vector<Edge> out;
  const auto kk = static_cast<std::uint32_t>(k);
  for (const Edge& e : edges) {
    if (degree[e.u] == kk || degree[e.v] == kk) out.push_back(e);
  }
  return EdgeSet::from_unsorted(std::move(out));
}

EdgeSet degree_estimator(const BicoloredGraph& g, int k) {
  return degree_estimator(g.vertex_count(), g.all_edges(), k);
}

Ratio core_planted_fraction(const PruningOutcome& outcome, const EdgeSet& h_star) {
  if (h_star.empty()) throw std::domain_error("core_planted_fraction: empty reference set");
  std::int64_t kept = 0;
  for (const Edge& e : h_star) {
    if (outcome.core.red().contains(e) || outcome.core.blue().contains(e)) ++kept;
  }
  return Ratio(kept, static_cast<std::int64_t>(h_star.size()));
}

}  // namespace pkf
