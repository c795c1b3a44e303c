#include "pkf/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "pkf/errors.hpp"

namespace pkf {

AvailabilitySets::AvailabilitySets(std::size_t n)
    : available_(n, 1),
      full_branching_(n, 1),
      available_count_(n),
      full_branching_count_(n),
      full_branching_low_water_(n) {}

void AvailabilitySets::remove_available(VertexId v) {
  if (available_[v]) {
    available_[v] = 0;
    --available_count_;
  }
}

void AvailabilitySets::remove_full_branching(VertexId v) {
  if (full_branching_[v]) {
    full_branching_[v] = 0;
    --full_branching_count_;
    full_branching_low_water_ = std::min(full_branching_low_water_, full_branching_count_);
  }
}

bool AvailabilitySets::check_invariant(const BicoloredGraph& g) const {
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!is_full_branching(v)) continue;
    if (!is_available(v)) return false;
    for (const Arc& arc : g.neighbors(v)) {
      if (arc.color == EdgeColor::Red && !is_available(arc.to)) return false;
    }
  }
  return true;
}

namespace {

// Seed-determined relabeling; "arbitrary" choices become lowest-relabeled-order
// choices, reproducible per seed but randomized across seeds.
std::vector<std::uint32_t> random_relabeling(std::size_t n, Rng& rng) {
  std::vector<std::uint32_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0u);
  rng.shuffle(sigma);
  return sigma;
}

std::vector<std::size_t> sorted_edge_order(const std::vector<Edge>& edges,
                                           const std::vector<std::uint32_t>& sigma) {
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t i) {
    const Edge& e = edges[i];
    const std::uint32_t a = std::min(sigma[e.u], sigma[e.v]);
    const std::uint32_t b = std::max(sigma[e.u], sigma[e.v]);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return key(i) < key(j); });
  return order;
}

}  // namespace

std::pair<ReservedEdges, AvailabilitySets> reserve_edges(const BicoloredGraph& g,
                                                         std::size_t m, Rng& rng,
                                                         std::optional<Edge> forbidden) {
  const std::size_t n = g.vertex_count();
  const std::vector<std::uint32_t> sigma = random_relabeling(n, rng);
  const std::vector<Edge>& red = g.red().edges();
  const std::vector<std::size_t> order = sorted_edge_order(red, sigma);

  std::vector<std::uint8_t> endpoint_used(n, 0);
  ReservedEdges reserved;
  reserved.edges.reserve(m);
  for (const std::size_t i : order) {
    if (reserved.edges.size() == m) break;
    const Edge& e = red[i];
    if (forbidden) {
      const Edge& f = *forbidden;
      if (e == f || e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v) continue;
    }
    if (endpoint_used[e.u] || endpoint_used[e.v]) continue;
    endpoint_used[e.u] = 1;
    endpoint_used[e.v] = 1;
    reserved.edges.push_back(e);
  }
  if (reserved.edges.size() < m) {
    throw ResourceError("reserve_edges: only " + std::to_string(reserved.edges.size()) +
                        " disjoint red edges available, needed " + std::to_string(m));
  }

  AvailabilitySets avail(n);
  for (const Edge& e : reserved.edges) {
    avail.remove_available(e.u);
    avail.remove_available(e.v);
  }
  for (const Edge& e : reserved.edges) {
    avail.remove_full_branching(e.u);
    avail.remove_full_branching(e.v);
    for (const VertexId end : {e.u, e.v}) {
      for (const Arc& arc : g.neighbors(end)) {
        if (arc.color == EdgeColor::Red) avail.remove_full_branching(arc.to);
      }
    }
  }
  return {std::move(reserved), std::move(avail)};
}

namespace {

// One side of Algorithm-style breadth-first growth. Returns true when the
// side reached `target` vertices before its leaf queue emptied.
bool grow_side(const BicoloredGraph& g, AvailabilitySets& avail,
               const std::vector<std::uint32_t>& sigma, VertexId root,
               std::size_t target, TreeSide& side) {
  side.nodes.clear();
  side.red_nodes.clear();
  side.nodes.push_back(TreeNode{root, -1, EdgeColor::Red});
  side.red_nodes.push_back(0);

  std::vector<std::uint32_t> leaf_queue{0};
  std::size_t head = 0;
  std::size_t s = 1;
  std::vector<std::pair<std::uint32_t, VertexId>> candidates;

  while (head < leaf_queue.size() && s < target) {
    const std::uint32_t u_idx = leaf_queue[head++];
    const VertexId u = side.nodes[u_idx].vertex;

    candidates.clear();
    for (const Arc& arc : g.neighbors(u)) {
      if (arc.color == EdgeColor::Blue && avail.is_full_branching(arc.to)) {
        candidates.emplace_back(sigma[arc.to], arc.to);
      }
    }
    std::sort(candidates.begin(), candidates.end());

    for (const auto& [key, v] : candidates) {
      if (s >= target) break;
      if (!avail.is_full_branching(v)) continue;  // consumed since the snapshot

      side.nodes.push_back(TreeNode{v, static_cast<std::int32_t>(u_idx), EdgeColor::Blue});
      const std::uint32_t v_idx = static_cast<std::uint32_t>(side.nodes.size() - 1);

      avail.remove_available(v);
      avail.remove_full_branching(v);

      // All red neighbors of a full-branching vertex are available, hence not
      // in any tree; attach them all as v's children.
      for (const Arc& arc : g.neighbors(v)) {
        if (arc.color != EdgeColor::Red) continue;
        const VertexId w = arc.to;
        side.nodes.push_back(TreeNode{w, static_cast<std::int32_t>(v_idx), EdgeColor::Red});
        const std::uint32_t w_idx = static_cast<std::uint32_t>(side.nodes.size() - 1);
        side.red_nodes.push_back(w_idx);
        leaf_queue.push_back(w_idx);
        ++s;
        avail.remove_available(w);
        avail.remove_full_branching(w);
      }
      ++s;  // v itself
      for (const Arc& arc : g.neighbors(v)) {
        if (arc.color != EdgeColor::Red) continue;
        for (const Arc& arc2 : g.neighbors(arc.to)) {
          if (arc2.color == EdgeColor::Red) avail.remove_full_branching(arc2.to);
        }
      }
    }
  }
  return s >= target;
}

void claim_root(const BicoloredGraph& g, AvailabilitySets& avail, Edge root) {
  for (const VertexId end : {root.u, root.v}) {
    avail.remove_available(end);
    avail.remove_full_branching(end);
    for (const Arc& arc : g.neighbors(end)) {
      if (arc.color == EdgeColor::Red) avail.remove_full_branching(arc.to);
    }
  }
}

// Grows both sides rooted at `root`; returns whether both reached 2*ell.
bool grow_two_sided(const BicoloredGraph& g, AvailabilitySets& avail,
                    const std::vector<std::uint32_t>& sigma, Edge root,
                    std::size_t ell, TwoSidedTree& tree, std::size_t& max_side) {
  claim_root(g, avail, root);
  tree.root_edge = root;
  const VertexId left_root = sigma[root.u] <= sigma[root.v] ? root.u : root.v;
  const VertexId right_root = left_root == root.u ? root.v : root.u;
  const std::size_t target = 2 * ell;

  const bool left_ok = grow_side(g, avail, sigma, left_root, target, tree.left);
  max_side = std::max(max_side, tree.left.size());
  if (!left_ok) return false;
  const bool right_ok = grow_side(g, avail, sigma, right_root, target, tree.right);
  max_side = std::max(max_side, tree.right.size());
  return right_ok;
}

}  // namespace

BuildTreesResult build_trees(const BicoloredGraph& g, int k, AvailabilitySets& avail,
                             std::size_t ell, std::size_t K, Rng& rng) {
  if (k < 1) throw std::domain_error("build_trees: k must be >= 1");
  if (ell == 0) throw std::domain_error("build_trees: ell must be >= 1");
  const std::size_t n = g.vertex_count();
  const std::vector<std::uint32_t> sigma = random_relabeling(n, rng);
  const std::vector<Edge>& red = g.red().edges();
  const std::vector<std::size_t> order = sorted_edge_order(red, sigma);

  BuildTreesResult result;
  std::size_t cursor = 0;
  for (std::size_t t = 0; t < K; ++t) {
    while (cursor < order.size()) {
      const Edge& e = red[order[cursor]];
      if (avail.is_available(e.u) && avail.is_available(e.v)) break;
      ++cursor;
    }
    if (cursor == order.size()) {
      result.exhausted = true;
      break;
    }
    const Edge root = red[order[cursor]];
    ++result.attempted;
    TwoSidedTree tree;
    if (grow_two_sided(g, avail, sigma, root, ell, tree, result.max_side_size)) {
      result.trees.push_back(std::move(tree));
    }
  }
  return result;
}

namespace {

// Path through a two-sided tree from a red node of the left side to a red
// node of the right side, root edge included. Appends vertices and the colors
// of the edges between consecutive appended vertices.
void append_tree_path(const TwoSidedTree& tree, std::uint32_t left_node,
                      std::uint32_t right_node, std::vector<VertexId>& verts,
                      std::vector<EdgeColor>& colors) {
  // Up from the left attachment to the left root: edge color at each hop is
  // the lower node's tag.
  std::int32_t cur = static_cast<std::int32_t>(left_node);
  while (cur >= 0) {
    const TreeNode& node = tree.left.nodes[static_cast<std::size_t>(cur)];
    verts.push_back(node.vertex);
    if (node.parent >= 0) colors.push_back(node.tag);
    cur = node.parent;
  }
  colors.push_back(EdgeColor::Red);  // the root edge

  // Down from the right root to the right attachment.
  std::vector<std::uint32_t> chain;
  cur = static_cast<std::int32_t>(right_node);
  while (cur >= 0) {
    chain.push_back(static_cast<std::uint32_t>(cur));
    cur = tree.right.nodes[static_cast<std::size_t>(cur)].parent;
  }
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const TreeNode& node = tree.right.nodes[*it];
    verts.push_back(node.vertex);
    if (it + 1 != chain.rend()) {
      colors.push_back(tree.right.nodes[*(it + 1)].tag);
    }
  }
}

struct Attachment {
  std::size_t edge_index;   // into ReservedEdges::edges
  std::uint32_t tree_node;  // red node index on the relevant side
};

struct LinkArc {
  std::size_t to;  // next tree
  Attachment from_right;  // reserved edge seen from this tree's right side
  Attachment into_left;   // reserved edge seen from the next tree's left side
};

void validate_cycle(const BicoloredGraph& g, const AlternatingCircuit& cyc) {
  cyc.validate(4);
  if (!cyc.is_simple()) throw ContractError("construction: cycle repeats a vertex");
  for (std::size_t i = 0; i < cyc.length(); ++i) {
    const auto col = g.color_of(cyc.edge_at(i));
    if (!col || *col != cyc.colors[i]) {
      throw ContractError("construction: cycle edge missing or color mismatch");
    }
  }
  xor_circuit(g.red(), cyc);  // throws unless the XOR is again a k-factor
}

}  // namespace

ConstructedCycles construct_cycles(const BicoloredGraph& g, int k,
                                   const ConstructionParams& params, Rng& rng) {
  if (!(params.gamma > 0.0)) throw std::domain_error("construct_cycles: gamma must be > 0");
  if (params.ell == 0 || params.d == 0) {
    throw std::domain_error("construct_cycles: ell and d must be positive");
  }
  const std::size_t n = g.vertex_count();
  ConstructedCycles out;

  std::size_t m = static_cast<std::size_t>(2.0 * params.gamma * static_cast<double>(n) /
                                           static_cast<double>(k));
  if (m % 2 == 1) {
    --m;
    out.padded_down = true;
  }
  out.reserved = m;
  if (m == 0) return out;

  auto [reserved, avail] = reserve_edges(g, m, rng);
  reserved.padded_down = out.padded_down;

  std::size_t K = params.tree_budget;
  if (K == 0) {
    K = static_cast<std::size_t>(params.gamma * static_cast<double>(n) /
                                 (2.0 * static_cast<double>(2 * params.ell + k) *
                                  static_cast<double>(k)));
  }
  BuildTreesResult built = build_trees(g, k, avail, params.ell, K, rng);
  out.attempted_trees = built.attempted;
  out.kept_trees = built.trees.size();
  out.max_side_size = built.max_side_size;
  out.full_branching_low_water = avail.full_branching_low_water();
  if (built.trees.empty()) return out;

  rng.shuffle(reserved.edges);
  reserved.left_count = m / 2;
  reserved.partitioned = true;

  // Tree-facing endpoint -> reserved edge index.
  std::vector<std::int64_t> tf_edge(n, -1);
  for (std::size_t i = 0; i < reserved.edges.size(); ++i) {
    tf_edge[reserved.tree_facing(i)] = static_cast<std::int64_t>(i);
  }

  std::vector<std::uint8_t> marked(reserved.edges.size(), 0);
  struct AdmittedTree {
    std::size_t tree_index;
    std::vector<Attachment> left, right;  // d entries each
  };
  std::vector<AdmittedTree> admitted;

  auto scan_side = [&](const TreeSide& side, bool want_left,
                       std::vector<Attachment>& found) {
    std::vector<std::uint8_t> seen(reserved.edges.size(), 0);
    for (const std::uint32_t node_idx : side.red_nodes) {
      const VertexId x = side.nodes[node_idx].vertex;
      for (const Arc& arc : g.neighbors(x)) {
        if (arc.color != EdgeColor::Blue) continue;
        const std::int64_t ei = tf_edge[arc.to];
        if (ei < 0) continue;
        const std::size_t e = static_cast<std::size_t>(ei);
        const bool in_left = e < reserved.left_count;
        if (in_left != want_left || marked[e] || seen[e]) continue;
        seen[e] = 1;
        found.push_back(Attachment{e, node_idx});
      }
    }
  };

  for (std::size_t i = 0; i < built.trees.size(); ++i) {
    std::vector<Attachment> left_found, right_found;
    scan_side(built.trees[i].left, true, left_found);
    if (left_found.size() < params.d) continue;
    scan_side(built.trees[i].right, false, right_found);
    if (right_found.size() < params.d) continue;
    left_found.resize(params.d);
    right_found.resize(params.d);
    for (const Attachment& a : left_found) marked[a.edge_index] = 1;
    for (const Attachment& a : right_found) marked[a.edge_index] = 1;
    admitted.push_back(AdmittedTree{i, std::move(left_found), std::move(right_found)});
  }
  out.admitted_trees = admitted.size();
  if (admitted.empty()) return out;

  // Directed link i -> j: some linking endpoint of j's left set is joined by a
  // blue edge to some linking endpoint of i's right set (i == j allowed; the
  // two endpoint sets are disjoint by the marking discipline).
  const std::size_t a_count = admitted.size();
  std::vector<std::vector<LinkArc>> links(a_count);
  for (std::size_t i = 0; i < a_count; ++i) {
    for (std::size_t j = 0; j < a_count; ++j) {
      bool done = false;
      for (const Attachment& f : admitted[i].right) {
        if (done) break;
        for (const Attachment& gl : admitted[j].left) {
          const Edge link(reserved.linking(f.edge_index), reserved.linking(gl.edge_index));
          if (g.blue().contains(link)) {
            links[i].push_back(LinkArc{j, f, gl});
            ++out.link_edges;
            done = true;
            break;
          }
        }
      }
    }
  }

  // Enumerate directed cycles of the link graph, smallest tree index first.
  std::vector<std::size_t> path;
  std::vector<const LinkArc*> path_arcs;
  std::vector<std::uint8_t> on_path(a_count, 0);

  auto emit_cycle = [&]() {
    AlternatingCircuit cyc;
    const std::size_t r = path.size();
    for (std::size_t s = 0; s < r; ++s) {
      const LinkArc* incoming = path_arcs[(s + r - 1) % r];  // arc into path[s]
      const LinkArc* outgoing = path_arcs[s];                // arc out of path[s]
      append_tree_path(built.trees[admitted[path[s]].tree_index],
                       incoming->into_left.tree_node, outgoing->from_right.tree_node,
                       cyc.verts, cyc.colors);
      // Five-edge bridge: blue to the tree-facing endpoint, red reserved edge,
      // blue linking edge, red reserved edge, blue back into the next tree.
      const std::size_t f = outgoing->from_right.edge_index;
      const std::size_t gl = outgoing->into_left.edge_index;
      cyc.colors.push_back(EdgeColor::Blue);
      cyc.verts.push_back(reserved.tree_facing(f));
      cyc.colors.push_back(EdgeColor::Red);
      cyc.verts.push_back(reserved.linking(f));
      cyc.colors.push_back(EdgeColor::Blue);
      cyc.verts.push_back(reserved.linking(gl));
      cyc.colors.push_back(EdgeColor::Red);
      cyc.verts.push_back(reserved.tree_facing(gl));
      cyc.colors.push_back(EdgeColor::Blue);
    }
    validate_cycle(g, cyc);
    out.cycles.push_back(std::move(cyc));
  };

  auto dfs = [&](auto&& self, std::size_t root, std::size_t cur) -> void {
    if (out.cycles.size() >= params.max_cycles) return;
    for (const LinkArc& arc : links[cur]) {
      if (out.cycles.size() >= params.max_cycles) return;
      if (arc.to == root) {
        path_arcs.push_back(&arc);
        emit_cycle();
        path_arcs.pop_back();
        continue;
      }
      if (arc.to < root || on_path[arc.to]) continue;
      on_path[arc.to] = 1;
      path.push_back(arc.to);
      path_arcs.push_back(&arc);
      self(self, root, arc.to);
      path_arcs.pop_back();
      path.pop_back();
      on_path[arc.to] = 0;
    }
  };

  for (std::size_t root = 0; root < a_count; ++root) {
    if (out.cycles.size() >= params.max_cycles) break;
    on_path.assign(a_count, 0);
    on_path[root] = 1;
    path.assign(1, root);
    path_arcs.clear();
    dfs(dfs, root, root);
  }
  return out;
}

ThreeEdgeResult three_edge_closure(const BicoloredGraph& g, int k, Edge e,
                                   std::size_t ell, double gamma, Rng& rng) {
  if (k < 1) throw std::domain_error("three_edge_closure: k must be >= 1");
  if (!g.red().contains(e)) {
    throw std::invalid_argument("three_edge_closure: edge is not planted");
  }
  if (!(gamma > 0.0)) throw std::domain_error("three_edge_closure: gamma must be > 0");
  if (ell == 0) throw std::domain_error("three_edge_closure: ell must be >= 1");

  const std::size_t n = g.vertex_count();
  const std::size_t m = static_cast<std::size_t>(gamma * static_cast<double>(n));
  ThreeEdgeResult result;
  result.reserved = m;
  if (m == 0) return result;

  auto [reserved, avail] = reserve_edges(g, m, rng, e);
  const std::vector<std::uint32_t> sigma = random_relabeling(n, rng);

  TwoSidedTree tree;
  claim_root(g, avail, e);
  tree.root_edge = e;
  const std::size_t target = 2 * ell;
  result.left_grown = grow_side(g, avail, sigma, e.u, target, tree.left);
  if (!result.left_grown) return result;
  result.right_grown = grow_side(g, avail, sigma, e.v, target, tree.right);
  if (!result.right_grown) return result;

  std::vector<std::int64_t> left_mark(n, -1), right_mark(n, -1);
  for (const std::uint32_t idx : tree.left.red_nodes) {
    left_mark[tree.left.nodes[idx].vertex] = idx;
  }
  for (const std::uint32_t idx : tree.right.red_nodes) {
    right_mark[tree.right.nodes[idx].vertex] = idx;
  }

  // First reserved edge whose smaller endpoint sees a red vertex of the left
  // side and larger endpoint sees a red vertex of the right side.
  for (std::size_t i = 0; i < reserved.edges.size(); ++i) {
    const VertexId a = reserved.edges[i].u;
    const VertexId b = reserved.edges[i].v;
    std::int64_t u_node = -1, v_node = -1;
    for (const Arc& arc : g.neighbors(a)) {
      if (arc.color == EdgeColor::Blue && left_mark[arc.to] >= 0) {
        u_node = left_mark[arc.to];
        break;
      }
    }
    if (u_node < 0) continue;
    for (const Arc& arc : g.neighbors(b)) {
      if (arc.color == EdgeColor::Blue && right_mark[arc.to] >= 0) {
        v_node = right_mark[arc.to];
        break;
      }
    }
    if (v_node < 0) continue;

    AlternatingCircuit cyc;
    append_tree_path(tree, static_cast<std::uint32_t>(u_node),
                     static_cast<std::uint32_t>(v_node), cyc.verts, cyc.colors);
    cyc.colors.push_back(EdgeColor::Blue);  // right red vertex -> b
    cyc.verts.push_back(b);
    cyc.colors.push_back(EdgeColor::Red);   // reserved edge b -> a
    cyc.verts.push_back(a);
    cyc.colors.push_back(EdgeColor::Blue);  // a -> left red vertex, closing
    validate_cycle(g, cyc);
    result.cycle = std::move(cyc);
    return result;
  }
  return result;
}

PaperPreset paper_preset(int k, double lambda, double alpha) {
  if (k < 1) throw std::domain_error("paper_preset: k must be >= 1");
  const double c = lambda * static_cast<double>(k);
  if (!(c > 1.0)) throw std::domain_error("paper_preset: requires k*lambda > 1");
  if (!(alpha >= 1.0)) throw std::domain_error("paper_preset: requires alpha >= 1");
  const double eps = c - 1.0;
  const double gamma = eps / (10.0 * (1.0 + eps));
  const double log32e = std::log(32.0 * std::exp(1.0));
  const double kd = static_cast<double>(k);
  PaperPreset preset;
  preset.gamma = gamma;
  preset.ell = 8192.0 * log32e * kd * kd * alpha / (lambda * lambda * gamma * gamma);
  preset.d = 2048.0 * log32e * kd * alpha / (lambda * gamma);
  return preset;
}

}  // namespace pkf
