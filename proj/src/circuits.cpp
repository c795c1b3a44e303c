#include "pkf/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "pkf/errors.hpp"

namespace pkf {

Edge AlternatingCircuit::edge_at(std::size_t i) const {
  return Edge(verts[i], verts[(i + 1) % verts.size()]);
}

std::vector<ColoredEdge> AlternatingCircuit::colored_edges() const {
  std::vector<ColoredEdge> out;
  out.reserve(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    out.push_back(ColoredEdge{edge_at(i), colors[i]});
  }
  return out;
}

EdgeSet AlternatingCircuit::edge_set() const {
  std::vector<Edge> out;
  out.reserve(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) out.push_back(edge_at(i));
  return EdgeSet::from_unsorted(std::move(out));
}

void AlternatingCircuit::validate(std::size_t min_len) const {
  const std::size_t len = verts.size();
  if (colors.size() != len) throw ContractError("circuit: colors/verts size mismatch");
  if (len < min_len) {
    throw ContractError("circuit: length " + std::to_string(len) + " below " +
                        std::to_string(min_len));
  }
  if (len % 2 != 0) throw ContractError("circuit: odd length " + std::to_string(len));
  for (std::size_t i = 0; i < len; ++i) {
    if (verts[i] == verts[(i + 1) % len]) throw ContractError("circuit: self-loop step");
    if (colors[i] == colors[(i + 1) % len]) {
      throw ContractError("circuit: color repeat at position " + std::to_string(i));
    }
  }
}

bool AlternatingCircuit::is_simple() const {
  std::vector<VertexId> v = verts;
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

std::vector<ColoredEdge> color_difference(const EdgeSet& h, const EdgeSet& h_star) {
  std::vector<ColoredEdge> out;
  for (const Edge& e : set_difference(h_star, h)) {
    out.push_back(ColoredEdge{e, EdgeColor::Red});
  }
  for (const Edge& e : set_difference(h, h_star)) {
    out.push_back(ColoredEdge{e, EdgeColor::Blue});
  }
  return out;
}

std::vector<AlternatingCircuit> decompose(const std::vector<ColoredEdge>& diff) {
  // Incidence lists per (vertex, color) with monotone cursors; the walk takes
  // the lowest-id unused edge of the required color.
  VertexId max_v = 0;
  for (const ColoredEdge& ce : diff) max_v = std::max(max_v, ce.e.v);
  const std::size_t n = diff.empty() ? 0 : static_cast<std::size_t>(max_v) + 1;

  std::vector<std::vector<std::uint32_t>> inc[2];
  inc[0].assign(n, {});
  inc[1].assign(n, {});
  for (std::uint32_t id = 0; id < diff.size(); ++id) {
    const auto c = static_cast<std::size_t>(diff[id].color);
    inc[c][diff[id].e.u].push_back(id);
    inc[c][diff[id].e.v].push_back(id);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (inc[0][v].size() != inc[1][v].size()) {
      throw std::invalid_argument("decompose: vertex " + std::to_string(v) +
                                  " has red degree " + std::to_string(inc[0][v].size()) +
                                  " but blue degree " + std::to_string(inc[1][v].size()));
    }
  }

  std::vector<std::uint8_t> used(diff.size(), 0);
  std::vector<std::uint32_t> cursor[2];
  cursor[0].assign(n, 0);
  cursor[1].assign(n, 0);

  auto take_next = [&](VertexId at, EdgeColor color) -> std::int64_t {
    const auto c = static_cast<std::size_t>(color);
    auto& cur = cursor[c][at];
    const auto& list = inc[c][at];
    while (cur < list.size() && used[list[cur]]) ++cur;
    if (cur == list.size()) return -1;
    return list[cur];
  };

  std::vector<AlternatingCircuit> circuits;
  for (std::uint32_t start = 0; start < diff.size(); ++start) {
    if (used[start]) continue;
    AlternatingCircuit c;
    const VertexId v0 = diff[start].e.u;
    const EdgeColor c0 = diff[start].color;
    used[start] = 1;
    c.verts.push_back(v0);
    c.colors.push_back(c0);
    VertexId cur = diff[start].e.v;
    EdgeColor last = c0;
    while (!(cur == v0 && last != c0)) {
      const std::int64_t id = take_next(cur, opposite(last));
      if (id < 0) {
        // Unreachable on balanced input: every arrival leaves an opposite-color
        // edge available (one-sided imbalance lives only at the walk's start).
        throw ContractError("decompose: walk stuck at vertex " + std::to_string(cur));
      }
      const ColoredEdge& ce = diff[static_cast<std::size_t>(id)];
      used[static_cast<std::size_t>(id)] = 1;
      c.verts.push_back(cur);
      c.colors.push_back(ce.color);
      cur = ce.e.u == cur ? ce.e.v : ce.e.u;
      last = ce.color;
    }
    c.validate(2);
    circuits.push_back(std::move(c));
  }
  return circuits;
}

EdgeSet xor_circuit(const EdgeSet& h, const AlternatingCircuit& c) {
  if (c.length() == 0) return h;
  c.validate(2);

  // Membership relative to h must alternate around the walk; the labels on c
  // are not trusted here.
  for (std::size_t i = 0; i < c.length(); ++i) {
    const bool in_h = h.contains(c.edge_at(i));
    const bool in_h_next = h.contains(c.edge_at((i + 1) % c.length()));
    if (in_h == in_h_next) {
      throw std::invalid_argument(
          "xor_circuit: circuit does not alternate relative to the factor at step " +
          std::to_string(i));
    }
  }

  EdgeSet result = symmetric_difference(h, c.edge_set());

  // n and k are implied by h being a k-factor: every vertex of [0,n) appears.
  VertexId max_v = 0;
  for (const Edge& e : h) max_v = std::max(max_v, e.v);
  const std::size_t n = static_cast<std::size_t>(max_v) + 1;
  if (h.empty() || (2 * h.size()) % n != 0) {
    throw std::invalid_argument("xor_circuit: h is not a factor");
  }
  const int k = static_cast<int>(2 * h.size() / n);
  if (!is_k_factor(result, n, k)) {
    throw ContractError("xor_circuit: result is not a " + std::to_string(k) + "-factor");
  }
  return result;
}

std::optional<AlternatingCircuit> find_alternating_4cycle(const BicoloredGraph& g) {
  // Scan red edges (a,b); extend b by a blue edge to c, c by a red edge to d,
  // and close with blue (d,a).
  for (const Edge& red1 : g.red()) {
    const VertexId ends[2] = {red1.u, red1.v};
    for (int side = 0; side < 2; ++side) {
      const VertexId a = ends[side];
      const VertexId b = ends[1 - side];
      for (const Arc& ab : g.neighbors(b)) {
        if (ab.color != EdgeColor::Blue) continue;
        const VertexId c = ab.to;
        if (c == a) continue;
        for (const Arc& bc : g.neighbors(c)) {
          if (bc.color != EdgeColor::Red) continue;
          const VertexId d = bc.to;
          if (d == a || d == b) continue;
          if (g.blue().contains(Edge(d, a))) {
            AlternatingCircuit cyc;
            cyc.verts = {a, b, c, d};
            cyc.colors = {EdgeColor::Red, EdgeColor::Blue, EdgeColor::Red,
                          EdgeColor::Blue};
            cyc.validate(4);
            return cyc;
          }
        }
      }
    }
  }
  return std::nullopt;
}

bool has_almost_alternating_cycle(const BicoloredGraph& g, std::size_t n_cap) {
  const std::size_t n = g.vertex_count();
  if (n > n_cap) {
    throw ResourceError("has_almost_alternating_cycle: instance too large (n = " +
                        std::to_string(n) + ", cap = " + std::to_string(n_cap) + ")");
  }
  // States (v, last color); a walk returning to its start closes a cycle whose
  // only possible color repeat sits at the wrap junction.
  std::vector<std::uint8_t> seen(2 * n);
  std::vector<std::pair<VertexId, EdgeColor>> stack;
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(seen.begin(), seen.end(), 0);
    stack.clear();
    for (const Arc& arc : g.neighbors(static_cast<VertexId>(s))) {
      const std::size_t key = 2 * arc.to + static_cast<std::size_t>(arc.color);
      if (!seen[key]) {
        seen[key] = 1;
        stack.emplace_back(arc.to, arc.color);
      }
    }
    while (!stack.empty()) {
      const auto [v, last] = stack.back();
      stack.pop_back();
      for (const Arc& arc : g.neighbors(v)) {
        if (arc.color == last) continue;
        if (arc.to == s) return true;
        const std::size_t key = 2 * arc.to + static_cast<std::size_t>(arc.color);
        if (!seen[key]) {
          seen[key] = 1;
          stack.emplace_back(arc.to, arc.color);
        }
      }
    }
  }
  return false;
}

namespace {

bool dfs_alt_path(const BicoloredGraph& g, VertexId cur, VertexId target,
                  EdgeColor last, std::vector<std::uint8_t>& on_path,
                  std::size_t& budget) {
  if (budget == 0) return false;
  --budget;
  for (const Arc& arc : g.neighbors(cur)) {
    if (arc.color == last) continue;
    if (arc.to == target) {
      // Close via the planted root edge: the final edge must be blue so both
      // wrap junctions alternate.
      if (arc.color == EdgeColor::Blue) return true;
      continue;
    }
    if (on_path[arc.to]) continue;
    on_path[arc.to] = 1;
    if (dfs_alt_path(g, arc.to, target, arc.color, on_path, budget)) return true;
    on_path[arc.to] = 0;
  }
  return false;
}

}  // namespace

bool on_alternating_cycle(const BicoloredGraph& g, Edge e, std::size_t node_budget) {
  if (!g.red().contains(e)) {
    throw std::invalid_argument("on_alternating_cycle: edge is not red");
  }
  std::vector<std::uint8_t> on_path(g.vertex_count(), 0);
  on_path[e.u] = 1;
  on_path[e.v] = 1;
  std::size_t budget = node_budget;
  // Simple alternating path v -> ... -> u starting and ending blue, closed by e.
  return dfs_alt_path(g, e.v, e.u, EdgeColor::Red, on_path, budget);
}

AlternatingNeighborhood alternating_neighborhood(const BicoloredGraph& g, Edge e,
                                                 std::size_t t) {
  if (!g.red().contains(e)) {
    throw std::invalid_argument("alternating_neighborhood: edge is not red");
  }
  const std::size_t n = g.vertex_count();
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  std::vector<std::uint32_t> dist(2 * n, kUnset);  // per (vertex, last color)

  std::vector<std::pair<VertexId, EdgeColor>> frontier, next;
  dist[2 * e.u + 0] = 0;
  dist[2 * e.v + 0] = 0;
  frontier.emplace_back(e.u, EdgeColor::Red);
  frontier.emplace_back(e.v, EdgeColor::Red);

  std::vector<Edge> sub_edges;
  std::vector<ColoredEdge> out_edges;
  out_edges.push_back(ColoredEdge{e, EdgeColor::Red});

  for (std::uint32_t depth = 1; depth <= t && !frontier.empty(); ++depth) {
    next.clear();
    for (const auto& [v, last] : frontier) {
      for (const Arc& arc : g.neighbors(v)) {
        if (arc.color == last) continue;
        const Edge step(v, arc.to);
        if (step == e) continue;  // walks leave the root edge, never reuse it
        sub_edges.push_back(step);
        const std::size_t key = 2 * arc.to + static_cast<std::size_t>(arc.color);
        if (dist[key] == kUnset) {
          dist[key] = depth;
          next.emplace_back(arc.to, arc.color);
        }
      }
    }
    std::swap(frontier, next);
  }

  {
    EdgeSet dedup = EdgeSet::from_unsorted(std::move(sub_edges));
    for (const Edge& se : dedup) {
      out_edges.push_back(ColoredEdge{se, *g.color_of(se)});
    }
  }

  std::vector<VertexId> boundary;
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint32_t d = std::min(dist[2 * v], dist[2 * v + 1]);
    if (d == t) boundary.push_back(static_cast<VertexId>(v));
  }
  return AlternatingNeighborhood{std::move(out_edges), std::move(boundary)};
}

EnumerationBound enumeration_bound(std::size_t n, int k, std::uint64_t t) {
  if (k < 1) throw std::domain_error("enumeration_bound: k must be >= 1");
  const std::uint64_t m = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(k) / 2;
  if (t > m) {
    throw std::domain_error("enumeration_bound: t = " + std::to_string(t) +
                            " exceeds kn/2 = " + std::to_string(m));
  }
  const double md = static_cast<double>(m);
  const double td = static_cast<double>(t);
  // log C(m,t) + log (2t-1)!!, with (2t-1)!! = (2t)! / (2^t t!).
  const double log_choose =
      std::lgamma(md + 1.0) - std::lgamma(td + 1.0) - std::lgamma(md - td + 1.0);
  const double log_dfac =
      std::lgamma(2.0 * td + 1.0) - td * std::log(2.0) - std::lgamma(td + 1.0);
  EnumerationBound out{log_choose + log_dfac, std::nullopt};

  if (m <= 64) {
    namespace mp = boost::multiprecision;
    mp::cpp_int choose = 1;
    for (std::uint64_t i = 0; i < t; ++i) {
      choose *= static_cast<std::uint64_t>(m - i);
      choose /= static_cast<std::uint64_t>(i + 1);
    }
    mp::cpp_int dfac = 1;
    for (std::uint64_t i = 1; i < 2 * t; i += 2) dfac *= i;
    out.exact = choose * dfac;
  }
  return out;
}

}  // namespace pkf
