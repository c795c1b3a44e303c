#include <doctest.h>

#include <cmath>
#include <vector>

#include "pkf/model.hpp"
#include "pkf/oracle.hpp"
#include "support.hpp"

using namespace pkf;
using testsupport::e;
using testsupport::make_graph;

namespace {

std::vector<Edge> complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (VertexId u = 0; u + 1 < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) edges.push_back(Edge(u, v));
  }
  return edges;
}

}  // namespace

TEST_CASE("catalog sizes on complete graphs match the closed forms") {
  CHECK(enumerate_k_factors(4, complete_graph(4), 1).size() == 3);    // (4-1)!!
  CHECK(enumerate_k_factors(6, complete_graph(6), 1).size() == 15);   // (6-1)!!
  CHECK(enumerate_k_factors(6, complete_graph(6), 2).size() == 70);   // 60 + 10
  CHECK(enumerate_k_factors(8, complete_graph(8), 1).size() == 105);  // (8-1)!!
}

TEST_CASE("every catalog entry is a k-factor and entries are unique") {
  const auto catalog = enumerate_k_factors(6, complete_graph(6), 2);
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    CHECK(is_k_factor(catalog.factors[i], 6, 2));
    if (i > 0) CHECK(catalog.factors[i - 1].edges() < catalog.factors[i].edges());
  }
}

TEST_CASE("backtracking agrees with subset brute force on random graphs") {
  Rng rng(606);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 4 + 2 * rng.below(3);  // 4, 6, 8
    const int k = (n <= 6 && rng.below(2) == 0) ? 2 : 1;
    std::vector<Edge> edges;
    for (VertexId u = 0; u + 1 < n; ++u) {
      for (VertexId v = u + 1; v < n; ++v) {
        if (rng.next_double() < 0.65) edges.push_back(Edge(u, v));
      }
    }
    const auto fast = enumerate_k_factors(n, edges, k);
    const auto brute = testsupport::brute_force_k_factors(n, edges, k);
    REQUIRE(fast.size() == brute.size());
    for (std::size_t i = 0; i < brute.size(); ++i) CHECK(fast.factors[i] == brute[i]);
  }
}

TEST_CASE("caps and budgets are hard errors") {
  CHECK_THROWS_AS(enumerate_k_factors(18, complete_graph(18), 1), ResourceError);
  CHECK_THROWS_AS(enumerate_k_factors(14, complete_graph(14), 2), ResourceError);
  OracleLimits tiny;
  tiny.node_budget = 5;
  CHECK_THROWS_AS(enumerate_k_factors(8, complete_graph(8), 1, tiny), ResourceError);
}

TEST_CASE("posterior sampling is uniform over the catalog") {
  const auto catalog = enumerate_k_factors(4, complete_graph(4), 1);
  Rng rng(2);
  std::vector<std::int64_t> counts(3, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const EdgeSet& f = posterior_sample(catalog, rng);
    for (std::size_t j = 0; j < 3; ++j) {
      if (f == catalog.factors[j]) ++counts[j];
    }
  }
  for (const auto c : counts) {
    CHECK(std::abs(static_cast<double>(c) / draws - 1.0 / 3) <= 0.01);
  }
  CHECK(testsupport::uniformity_pvalue(counts) > 0.001);

  FactorCatalog empty;
  CHECK_THROWS_AS(posterior_sample(empty, rng), std::domain_error);

  FactorCatalog singleton;
  singleton.n = 4;
  singleton.k = 1;
  singleton.factors = {catalog.factors[0]};
  for (int i = 0; i < 10; ++i) CHECK(posterior_sample(singleton, rng) == catalog.factors[0]);
}

TEST_CASE("overlap histogram worked examples") {
  const BicoloredGraph bare = make_graph(4, {e(0, 1), e(2, 3)}, {});
  const auto catalog = enumerate_k_factors(bare, 1);
  const auto hist = overlap_histogram(catalog, bare.red());
  CHECK(hist.total == 1);
  CHECK(hist.by_distance[0] == 1);

  const BicoloredGraph cyc = make_graph(4, {e(0, 1), e(2, 3)}, {e(1, 2), e(0, 3)});
  const auto catalog2 = enumerate_k_factors(cyc, 1);
  const auto hist2 = overlap_histogram(catalog2, cyc.red());
  CHECK(hist2.total == 2);  // the two matchings of the 4-cycle
  CHECK(hist2.by_distance[0] == 1);
  CHECK(hist2.by_distance[2] == 1);
  CHECK(hist2.by_overlap[2] == 1);
  CHECK(hist2.by_overlap[0] == 1);

  CHECK_THROWS_AS(overlap_histogram(catalog2, EdgeSet::from_unsorted({e(0, 1)})),
                  std::domain_error);
}

TEST_CASE("posterior sampling composed with the histogram recovers the masses") {
  Rng rng(33);
  const PlantedInstance inst = plant(ModelParams{10, 1, 1.0, 33}, rng);
  const auto catalog = enumerate_k_factors(inst.graph, 1);
  const auto hist = overlap_histogram(catalog, inst.h_star);
  REQUIRE(catalog.size() >= 1);

  const int draws = 50000;
  std::vector<std::int64_t> seen(hist.by_distance.size(), 0);
  for (int i = 0; i < draws; ++i) {
    const EdgeSet& f = posterior_sample(catalog, rng);
    ++seen[symmetric_difference(f, inst.h_star).size() / 2];
  }
  for (std::size_t t = 0; t < seen.size(); ++t) {
    const double expect = static_cast<double>(hist.by_distance[t]) /
                          static_cast<double>(hist.total);
    const double got = static_cast<double>(seen[t]) / draws;
    CHECK(std::abs(got - expect) <=
          5 * std::sqrt(std::max(expect, 1e-4) / draws) + 1e-9);
  }
}

TEST_CASE("with no background the catalog is exactly the planted factor") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const PlantedInstance inst = plant(ModelParams{10, 1, 0.0, seed}, rng);
    const auto catalog = enumerate_k_factors(inst.graph, 1);
    REQUIRE(catalog.size() == 1);
    CHECK(catalog.factors[0] == inst.h_star);
  }
}

TEST_CASE("cycle fraction among 2-factors") {
  CHECK(fraction_cycle_2factors(4) == Ratio(1, 1));
  CHECK(fraction_cycle_2factors(5) == Ratio(1, 1));   // 12 of 12
  CHECK(fraction_cycle_2factors(6) == Ratio(6, 7));   // 60 of 70
  CHECK(fraction_cycle_2factors(8) == Ratio(2520, 3507));
  for (std::size_t m = 4; m <= 8; ++m) {
    const Ratio f = fraction_cycle_2factors(m);
    CHECK(f.num * static_cast<std::int64_t>(m) >= f.den);  // >= 1/m
  }
  CHECK_THROWS_AS(fraction_cycle_2factors(13), ResourceError);
}
