#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "pkf/circuits.hpp"
#include "pkf/errors.hpp"
#include "pkf/model.hpp"
#include "pkf/oracle.hpp"
#include "pkf/pruning.hpp"
#include "support.hpp"

using namespace pkf;
using testsupport::e;
using testsupport::make_graph;

namespace {

// Multiset equality of colored edges, order-free.
bool same_multiset(std::vector<ColoredEdge> a, std::vector<ColoredEdge> b) {
  auto key = [](const ColoredEdge& ce) {
    return std::tuple(ce.e.u, ce.e.v, static_cast<int>(ce.color));
  };
  auto lt = [&](const ColoredEdge& x, const ColoredEdge& y) { return key(x) < key(y); };
  std::sort(a.begin(), a.end(), lt);
  std::sort(b.begin(), b.end(), lt);
  return a == b;
}

std::vector<ColoredEdge> flatten(const std::vector<AlternatingCircuit>& circuits) {
  std::vector<ColoredEdge> out;
  for (const auto& c : circuits) {
    const auto edges = c.colored_edges();
    out.insert(out.end(), edges.begin(), edges.end());
  }
  return out;
}

}  // namespace

TEST_CASE("decompose handles the base cases") {
  CHECK(decompose({}).empty());

  const std::vector<ColoredEdge> cyc4 = {
      {e(0, 1), EdgeColor::Red},
      {e(1, 2), EdgeColor::Blue},
      {e(2, 3), EdgeColor::Red},
      {e(0, 3), EdgeColor::Blue},
  };
  const auto circuits = decompose(cyc4);
  REQUIRE(circuits.size() == 1);
  CHECK(circuits[0].length() == 4);
  CHECK(same_multiset(flatten(circuits), cyc4));

  std::vector<ColoredEdge> two = cyc4;
  two.push_back({e(4, 5), EdgeColor::Red});
  two.push_back({e(5, 6), EdgeColor::Blue});
  two.push_back({e(6, 7), EdgeColor::Red});
  two.push_back({e(4, 7), EdgeColor::Blue});
  const auto circuits2 = decompose(two);
  REQUIRE(circuits2.size() == 2);
  CHECK(circuits2[0].length() == 4);
  CHECK(circuits2[1].length() == 4);
  CHECK(same_multiset(flatten(circuits2), two));
}

TEST_CASE("decompose rejects unbalanced input naming the vertex") {
  const std::vector<ColoredEdge> bad = {{e(0, 1), EdgeColor::Red},
                                        {e(1, 2), EdgeColor::Blue},
                                        {e(2, 3), EdgeColor::Red}};
  CHECK_THROWS_WITH_AS(decompose(bad),
                       doctest::Contains("vertex 0"), std::invalid_argument);
}

TEST_CASE("factor differences decompose and fold back in any order") {
  Rng rng(404);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 6 + 2 * rng.below(4);  // 6..12
    const int k = 1 + static_cast<int>(rng.below(2));
    Rng sample_rng(derive_seed(404, trial, 0));
    const EdgeSet h1 = sample_k_regular(n, k, sample_rng);
    const EdgeSet h2 = sample_k_regular(n, k, sample_rng);

    const auto diff = color_difference(h1, h2);  // red = h2 side
    auto circuits = decompose(diff);
    CHECK(same_multiset(flatten(circuits), diff));
    for (const auto& c : circuits) c.validate(4);

    // folding the circuits onto h1 lands on h2, in any order
    for (int order = 0; order < 3; ++order) {
      auto perm = circuits;
      if (order == 1) std::reverse(perm.begin(), perm.end());
      if (order == 2) sample_rng.shuffle(perm);
      EdgeSet cur = h1;
      for (const auto& c : perm) cur = xor_circuit(cur, c);
      CHECK(cur == h2);
    }
  }
}

TEST_CASE("xor_circuit worked examples") {
  const EdgeSet h = EdgeSet::from_unsorted({e(0, 1), e(2, 3)});

  AlternatingCircuit empty;
  CHECK(xor_circuit(h, empty) == h);

  AlternatingCircuit cyc;
  cyc.verts = {0, 1, 2, 3};
  cyc.colors = {EdgeColor::Red, EdgeColor::Blue, EdgeColor::Red, EdgeColor::Blue};
  const EdgeSet swapped = xor_circuit(h, cyc);
  CHECK(swapped == EdgeSet::from_unsorted({e(1, 2), e(0, 3)}));
  CHECK(xor_circuit(swapped, cyc) == h);  // involution
  CHECK(symmetric_difference(swapped, h).size() == cyc.edge_set().size());
}

TEST_CASE("xor_circuit rejects malformed circuits") {
  const EdgeSet h = EdgeSet::from_unsorted({e(0, 1), e(2, 3)});
  AlternatingCircuit odd;
  odd.verts = {0, 1, 2};
  odd.colors = {EdgeColor::Red, EdgeColor::Blue, EdgeColor::Red};
  CHECK_THROWS_AS(xor_circuit(h, odd), ContractError);  // odd length

  AlternatingCircuit wrong;  // alternates as labels but not relative to h
  wrong.verts = {0, 2, 1, 3};
  wrong.colors = {EdgeColor::Red, EdgeColor::Blue, EdgeColor::Red, EdgeColor::Blue};
  CHECK_THROWS_AS(xor_circuit(h, wrong), std::invalid_argument);
}

TEST_CASE("alternating 4-cycle finder") {
  const BicoloredGraph bare = make_graph(4, {e(0, 1), e(2, 3)}, {});
  CHECK_FALSE(find_alternating_4cycle(bare).has_value());

  const BicoloredGraph cyc = make_graph(4, {e(0, 1), e(2, 3)}, {e(1, 2), e(0, 3)});
  const auto found = find_alternating_4cycle(cyc);
  REQUIRE(found.has_value());
  found->validate(4);
  CHECK(found->length() == 4);
  CHECK(found->edge_set() ==
        EdgeSet::from_unsorted({e(0, 1), e(1, 2), e(2, 3), e(0, 3)}));

  const BicoloredGraph one_blue = make_graph(4, {e(0, 1), e(2, 3)}, {e(0, 2)});
  CHECK_FALSE(find_alternating_4cycle(one_blue).has_value());
}

TEST_CASE("almost-alternating cycle detector on hand-checked instances") {
  // Monochromatic cycles have at least two color repeats.
  const BicoloredGraph red4 = make_graph(4, {e(0, 1), e(1, 2), e(2, 3), e(0, 3)}, {});
  CHECK_FALSE(has_almost_alternating_cycle(red4));

  const BicoloredGraph alt4 = make_graph(4, {e(0, 1), e(2, 3)}, {e(1, 2), e(0, 3)});
  CHECK(has_almost_alternating_cycle(alt4));

  // One red edge and two blue edges: junctions R|B, B|B, B|R, one repeat.
  const BicoloredGraph one_red = make_graph(3, {e(0, 1)}, {e(1, 2), e(0, 2)});
  CHECK(has_almost_alternating_cycle(one_red));

  // Two red edges and one blue edge: junctions R|R, R|B, B|R, also one repeat.
  const BicoloredGraph two_red = make_graph(3, {e(0, 1), e(1, 2)}, {e(0, 2)});
  CHECK(has_almost_alternating_cycle(two_red));

  // A triangle with three same-colored edges has three repeats.
  const BicoloredGraph blue3 = make_graph(3, {}, {e(0, 1), e(1, 2), e(0, 2)});
  CHECK_FALSE(has_almost_alternating_cycle(blue3));

  CHECK_THROWS_AS(has_almost_alternating_cycle(make_graph(300, {}, {}), 200),
                  ResourceError);
}

TEST_CASE("almost-alternating detector agrees with brute force") {
  Rng rng(7070);
  int positives = 0;
  for (int trial = 0; trial < 800; ++trial) {
    const std::size_t n = 3 + rng.below(7);
    std::vector<Edge> red, blue;
    const double p = 0.5 * rng.next_double() + 0.1;
    for (VertexId u = 0; u + 1 < n; ++u) {
      for (VertexId v = u + 1; v < n; ++v) {
        const double roll = rng.next_double();
        if (roll < p / 2) {
          red.push_back(Edge(u, v));
        } else if (roll < p) {
          blue.push_back(Edge(u, v));
        }
      }
    }
    const BicoloredGraph g = make_graph(n, red, blue);
    const bool fast = has_almost_alternating_cycle(g);
    CHECK(fast == testsupport::brute_force_almost_alternating(g));
    if (fast) ++positives;
  }
  CHECK(positives > 100);
  CHECK(positives < 800);
}

TEST_CASE("planted edges on alternating cycles are found, and only then") {
  const BicoloredGraph bare = make_graph(4, {e(0, 1), e(2, 3)}, {});
  CHECK_FALSE(on_alternating_cycle(bare, e(0, 1)));
  CHECK_THROWS_AS(on_alternating_cycle(bare, e(1, 2)), std::invalid_argument);

  const BicoloredGraph cyc = make_graph(4, {e(0, 1), e(2, 3)}, {e(1, 2), e(0, 3)});
  CHECK(on_alternating_cycle(cyc, e(0, 1)));
  CHECK(on_alternating_cycle(cyc, e(2, 3)));
}

TEST_CASE("alternating neighborhood matches the hand traces") {
  const BicoloredGraph cyc = make_graph(4, {e(0, 1), e(2, 3)}, {e(1, 2), e(0, 3)});

  const auto depth0 = alternating_neighborhood(cyc, e(0, 1), 0);
  REQUIRE(depth0.edges.size() == 1);
  CHECK(depth0.edges[0].e == e(0, 1));
  CHECK(depth0.boundary == std::vector<VertexId>{0, 1});

  const BicoloredGraph bare = make_graph(6, {e(0, 1), e(2, 3), e(4, 5)}, {});
  const auto no_blue = alternating_neighborhood(bare, e(0, 1), 1);
  CHECK(no_blue.boundary.empty());
  CHECK(no_blue.edges.size() == 1);

  const auto depth1 = alternating_neighborhood(cyc, e(0, 1), 1);
  CHECK(depth1.boundary == std::vector<VertexId>{2, 3});
  EdgeSet got;
  for (const auto& ce : depth1.edges) got.insert(ce.e);
  CHECK(got.contains(e(1, 2)));
  CHECK(got.contains(e(0, 3)));

  CHECK_THROWS_AS(alternating_neighborhood(cyc, e(1, 2), 1), std::invalid_argument);
}

TEST_CASE("enumeration bound worked values and exactness") {
  const auto b0 = enumeration_bound(10, 2, 0);
  REQUIRE(b0.exact.has_value());
  CHECK(*b0.exact == 1);
  CHECK(b0.log_value == doctest::Approx(0.0).epsilon(1e-12));

  const auto b1 = enumeration_bound(4, 1, 1);
  REQUIRE(b1.exact.has_value());
  CHECK(*b1.exact == 2);  // C(2,1) * 1!!

  CHECK_THROWS_AS(enumeration_bound(4, 1, 3), std::domain_error);

  // log value tracks the exact value wherever the exact value exists
  for (std::size_t n : {4, 8, 16, 32}) {
    for (int k : {1, 2}) {
      const std::uint64_t half = n * k / 2;
      if (half > 64) continue;
      for (std::uint64_t t = 0; t <= half; ++t) {
        const auto b = enumeration_bound(n, k, t);
        REQUIRE(b.exact.has_value());
        const double exact_log =
            std::log(boost::multiprecision::cpp_int(*b.exact).convert_to<double>());
        CHECK(std::abs(b.log_value - exact_log) <=
              1e-12 * std::max(1.0, std::abs(exact_log)));
      }
    }
  }
}

TEST_CASE("enumeration bound is dominated by the closed-form chain") {
  // C(kn/2,t)(2t-1)!! <= (kn)^t exp(-t(t-1)/(kn)) for all t <= kn/2, n <= 30
  for (std::size_t n = 2; n <= 30; ++n) {
    for (int k : {1, 2}) {
      const std::uint64_t half = static_cast<std::uint64_t>(n) * k / 2;
      for (std::uint64_t t = 0; t <= half; ++t) {
        const double lhs = enumeration_bound(n, k, t).log_value;
        const double kn = static_cast<double>(n) * k;
        const double td = static_cast<double>(t);
        const double rhs = td * std::log(kn) - td * (td - 1.0) / kn;
        CHECK(lhs <= rhs + 1e-9);
      }
    }
  }
}

TEST_CASE("exact factor counts by distance never exceed the bound") {
  // all k-factors of the complete graph, stratified by distance to a fixed H*
  Rng rng(808);
  for (std::size_t n = 4; n <= 8; n += 2) {
    for (int k : {1, 2}) {
      std::vector<Edge> complete;
      for (VertexId u = 0; u + 1 < n; ++u) {
        for (VertexId v = u + 1; v < n; ++v) complete.push_back(Edge(u, v));
      }
      const auto catalog = enumerate_k_factors(n, complete, k);
      const EdgeSet h_star = sample_k_regular(n, k, rng);
      const auto hist = overlap_histogram(catalog, h_star);
      for (std::size_t t = 0; t < hist.by_distance.size(); ++t) {
        const auto bound = enumeration_bound(n, k, t);
        REQUIRE(bound.exact.has_value());
        CHECK(boost::multiprecision::cpp_int(hist.by_distance[t]) <= *bound.exact);
      }
    }
  }
}
