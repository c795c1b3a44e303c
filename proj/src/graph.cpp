#include "pkf/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace pkf {

Edge::Edge(VertexId a, VertexId b) {
  if (a == b) throw std::invalid_argument("Edge: self-loop (" + std::to_string(a) + ")");
  u = a < b ? a : b;
  v = a < b ? b : a;
}

EdgeSet EdgeSet::from_unsorted(std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  EdgeSet s;
  s.edges_ = std::move(edges);
  return s;
}

bool EdgeSet::contains(Edge e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

bool EdgeSet::insert(Edge e) {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it != edges_.end() && *it == e) return false;
  edges_.insert(it, e);
  return true;
}

namespace {

enum class MergeOp { SymDiff, Union, Diff, Intersect };

EdgeSet merge(const EdgeSet& a, const EdgeSet& b, MergeOp op) {
  std::vector<Edge> out;
  const auto& ea = a.edges();
  const auto& eb = b.edges();
  std::size_t i = 0, j = 0;
  const bool keep_a_only = op != MergeOp::Intersect;
  const bool keep_b_only = op == MergeOp::SymDiff || op == MergeOp::Union;
  const bool keep_both = op == MergeOp::Union || op == MergeOp::Intersect;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i] < eb[j])) {
      if (keep_a_only) out.push_back(ea[i]);
      ++i;
    } else if (i == ea.size() || eb[j] < ea[i]) {
      if (keep_b_only) out.push_back(eb[j]);
      ++j;
    } else {
      if (keep_both) out.push_back(ea[i]);
      ++i;
      ++j;
    }
  }
  return EdgeSet::from_unsorted(std::move(out));
}

}  // namespace

EdgeSet symmetric_difference(const EdgeSet& a, const EdgeSet& b) {
  return merge(a, b, MergeOp::SymDiff);
}
EdgeSet set_union(const EdgeSet& a, const EdgeSet& b) {
  return merge(a, b, MergeOp::Union);
}
EdgeSet set_difference(const EdgeSet& a, const EdgeSet& b) {
  return merge(a, b, MergeOp::Diff);
}
EdgeSet set_intersection(const EdgeSet& a, const EdgeSet& b) {
  return merge(a, b, MergeOp::Intersect);
}

Ratio risk(const EdgeSet& h_star, const EdgeSet& h_hat) {
  if (h_star.empty()) throw std::domain_error("risk: empty reference edge set");
  const auto delta = symmetric_difference(h_star, h_hat);
  return Ratio(static_cast<std::int64_t>(delta.size()),
               static_cast<std::int64_t>(h_star.size()));
}

bool is_k_factor(const EdgeSet& edges, std::size_t n, int k) {
  std::vector<std::int32_t> deg(n, 0);
  for (const Edge& e : edges) {
    if (e.v >= n) return false;
    ++deg[e.u];
    ++deg[e.v];
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (deg[v] != k) return false;
  }
  return true;
}

BicoloredGraph::BicoloredGraph(std::size_t n, EdgeSet red, EdgeSet blue)
    : n_(n), red_(std::move(red)), blue_(std::move(blue)) {
  if (!set_intersection(red_, blue_).empty()) {
    throw std::invalid_argument("BicoloredGraph: red and blue sets overlap");
  }
  std::vector<std::uint32_t> deg(n_ + 1, 0);
  auto check_and_count = [&](const EdgeSet& s) {
    for (const Edge& e : s) {
      if (e.v >= n_) {
        throw std::invalid_argument("BicoloredGraph: endpoint " +
                                    std::to_string(e.v) + " out of range");
      }
      ++deg[e.u];
      ++deg[e.v];
    }
  };
  check_and_count(red_);
  check_and_count(blue_);

  adj_offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) adj_offsets_[v + 1] = adj_offsets_[v] + deg[v];
  adj_arcs_.resize(adj_offsets_[n_]);
  std::vector<std::uint32_t> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
  auto emit = [&](const EdgeSet& s, EdgeColor c) {
    for (const Edge& e : s) {
      adj_arcs_[cursor[e.u]++] = Arc{e.v, c};
      adj_arcs_[cursor[e.v]++] = Arc{e.u, c};
    }
  };
  emit(red_, EdgeColor::Red);
  emit(blue_, EdgeColor::Blue);
  for (std::size_t v = 0; v < n_; ++v) {
    std::sort(adj_arcs_.begin() + adj_offsets_[v], adj_arcs_.begin() + adj_offsets_[v + 1],
              [](const Arc& a, const Arc& b) { return a.to < b.to; });
  }
}

std::span<const Arc> BicoloredGraph::neighbors(VertexId v) const {
  return {adj_arcs_.data() + adj_offsets_[v],
          adj_arcs_.data() + adj_offsets_[v + 1]};
}

bool BicoloredGraph::has_edge(Edge e) const {
  return red_.contains(e) || blue_.contains(e);
}

std::optional<EdgeColor> BicoloredGraph::color_of(Edge e) const {
  if (red_.contains(e)) return EdgeColor::Red;
  if (blue_.contains(e)) return EdgeColor::Blue;
  return std::nullopt;
}

std::vector<Edge> BicoloredGraph::all_edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  const auto& r = red_.edges();
  const auto& b = blue_.edges();
  std::merge(r.begin(), r.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void write_edge_list(std::ostream& os, const BicoloredGraph& g, int k) {
  os << g.vertex_count() << '\t' << k << '\n';
  const auto& r = g.red().edges();
  const auto& b = g.blue().edges();
  std::size_t i = 0, j = 0;
  auto line = [&os](const Edge& e, char c) {
    os << e.u << '\t' << e.v << '\t' << c << '\n';
  };
  while (i < r.size() || j < b.size()) {
    if (j == b.size() || (i < r.size() && r[i] < b[j])) {
      line(r[i++], 'R');
    } else {
      line(b[j++], 'B');
    }
  }
}

EdgeListFile read_edge_list(std::istream& is) {
  std::size_t n = 0;
  int k = 0;
  std::string header;
  if (!std::getline(is, header)) {
    throw std::runtime_error("edge list: missing header");
  }
  {
    std::istringstream hs(header);
    if (!(hs >> n >> k)) throw std::runtime_error("edge list: bad header: " + header);
  }
  std::vector<Edge> red, blue;
  std::string linebuf;
  while (std::getline(is, linebuf)) {
    if (linebuf.empty()) continue;
    std::istringstream ls(linebuf);
    std::uint64_t a = 0, b = 0;
    char c = 0;
    if (!(ls >> a >> b >> c)) throw std::runtime_error("edge list: bad line: " + linebuf);
    Edge e(static_cast<VertexId>(a), static_cast<VertexId>(b));
    if (c == 'R') {
      red.push_back(e);
    } else if (c == 'B') {
      blue.push_back(e);
    } else {
      throw std::runtime_error("edge list: bad color tag: " + linebuf);
    }
  }
  return EdgeListFile{
      BicoloredGraph(n, EdgeSet::from_unsorted(std::move(red)),
                     EdgeSet::from_unsorted(std::move(blue))),
      k};
}

void save_edge_list(const std::string& path, const BicoloredGraph& g, int k) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_edge_list(os, g, k);
  if (!os) throw std::runtime_error("write failed: " + path);
}

EdgeListFile load_edge_list(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return read_edge_list(is);
}

}  // namespace pkf
