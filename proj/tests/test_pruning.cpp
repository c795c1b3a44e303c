#include <doctest.h>

#include <numeric>
#include <vector>

#include "pkf/model.hpp"
#include "pkf/pruning.hpp"
#include "support.hpp"

using namespace pkf;
using testsupport::e;
using testsupport::make_graph;

namespace {

// Relabels a graph by a vertex permutation; pruning the relabeled instance and
// mapping back exercises a different processing order through the same code.
BicoloredGraph relabel(const BicoloredGraph& g, const std::vector<VertexId>& perm) {
  std::vector<Edge> red, blue;
  for (const Edge& ed : g.red()) red.push_back(Edge(perm[ed.u], perm[ed.v]));
  for (const Edge& ed : g.blue()) blue.push_back(Edge(perm[ed.u], perm[ed.v]));
  return make_graph(g.vertex_count(), red, blue);
}

EdgeSet unrelabel(const EdgeSet& s, const std::vector<VertexId>& perm,
                  std::size_t n) {
  std::vector<VertexId> inv(n);
  for (VertexId v = 0; v < n; ++v) inv[perm[v]] = v;
  std::vector<Edge> out;
  for (const Edge& ed : s) out.push_back(Edge(inv[ed.u], inv[ed.v]));
  return EdgeSet::from_unsorted(out);
}

}  // namespace

TEST_CASE("a bare factor prunes completely") {
  Rng rng(1);
  for (const auto& [n, k] : std::vector<std::pair<std::size_t, int>>{{12, 1}, {15, 2}, {8, 3}}) {
    const PlantedInstance inst = plant(ModelParams{n, k, 0.0, 1}, rng);
    const PruningOutcome out = iterative_prune(inst.graph, k);
    CHECK(out.identified_planted == inst.h_star);
    CHECK(out.core.edge_count() == 0);
    CHECK(out.removed_unplanted.empty());
  }
}

TEST_CASE("single blue chord collapses by hand-checked cascade") {
  // deg(0)=1 fires; capacity of 1 drops to 0, removing (1,2); then 2 and 3 fire.
  const BicoloredGraph g = make_graph(4, {e(0, 1), e(2, 3)}, {e(1, 2)});
  const PruningOutcome out = iterative_prune(g, 1);
  CHECK(out.identified_planted == EdgeSet::from_unsorted({e(0, 1), e(2, 3)}));
  CHECK(out.removed_unplanted == EdgeSet::from_unsorted({e(1, 2)}));
  CHECK(out.core.edge_count() == 0);
}

TEST_CASE("alternating 4-cycle is inert and stays as the core") {
  const BicoloredGraph g = make_graph(4, {e(0, 1), e(2, 3)}, {e(1, 2), e(0, 3)});
  const PruningOutcome out = iterative_prune(g, 1);
  CHECK(out.identified_planted.empty());
  CHECK(out.removed_unplanted.empty());
  CHECK(out.core.edge_count() == 4);
  CHECK(out.core.red() == g.red());
  CHECK(out.core.blue() == g.blue());
  CHECK(core_planted_fraction(out, g.red()) == Ratio(1, 1));
}

TEST_CASE("empty graph produces an empty outcome") {
  const RawPruneResult res = iterative_prune_raw(0, {}, 1);
  CHECK(res.fate.empty());
  const BicoloredGraph g = make_graph(4, {}, {});
  const PruningOutcome out = iterative_prune(g, 2);
  CHECK(out.core.edge_count() == 0);
}

TEST_CASE("core planted fraction worked values") {
  // Two planted edges locked in an alternating 4-cycle, two free: fraction 1/2.
  const BicoloredGraph g =
      make_graph(8, {e(0, 1), e(2, 3), e(4, 5), e(6, 7)}, {e(1, 2), e(0, 3)});
  const PruningOutcome out = iterative_prune(g, 1);
  CHECK(core_planted_fraction(out, g.red()) == Ratio(1, 2));

  const BicoloredGraph clean = make_graph(4, {e(0, 1), e(2, 3)}, {});
  const PruningOutcome out2 = iterative_prune(clean, 1);
  CHECK(core_planted_fraction(out2, clean.red()) == Ratio(0, 1));

  CHECK_THROWS_AS(core_planted_fraction(out, EdgeSet{}), std::domain_error);
}

TEST_CASE("degree estimator worked examples") {
  const BicoloredGraph bare = make_graph(6, {e(0, 1), e(2, 3), e(4, 5)}, {});
  CHECK(degree_estimator(bare, 1) == bare.red());

  const BicoloredGraph cyc = make_graph(4, {e(0, 1), e(2, 3)}, {e(1, 2), e(0, 3)});
  CHECK(degree_estimator(cyc, 1).empty());

  const BicoloredGraph chord = make_graph(4, {e(0, 1), e(2, 3)}, {e(1, 2)});
  CHECK(degree_estimator(chord, 1) == EdgeSet::from_unsorted({e(0, 1), e(2, 3)}));
}

TEST_CASE("pruning never misclassifies on planted instances") {
  Rng rng(90);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 10 + 2 * rng.below(26);
    const int k = 1 + static_cast<int>(rng.below(3));
    if ((n * k) % 2) continue;
    const double lambda = 3.0 * rng.next_double();
    Rng trial_rng(derive_seed(90, trial, 0));
    const PlantedInstance inst = plant(ModelParams{n, k, lambda, 0}, trial_rng);
    const PruningOutcome out = iterative_prune(inst.graph, k);

    CHECK(set_difference(out.identified_planted, inst.h_star).empty());
    CHECK(set_intersection(out.removed_unplanted, inst.h_star).empty());

    // the three buckets partition the edges
    const EdgeSet all = set_union(inst.graph.red(), inst.graph.blue());
    EdgeSet rebuilt = set_union(out.identified_planted, out.removed_unplanted);
    rebuilt = set_union(rebuilt, set_union(out.core.red(), out.core.blue()));
    CHECK(rebuilt == all);
    CHECK(all.size() == out.identified_planted.size() + out.removed_unplanted.size() +
                            out.core.edge_count());
    CHECK(out.stats.capacity_underflows == 0);
  }
}

TEST_CASE("degree estimator is contained in the full pruning output") {
  Rng rng(91);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 20 + 2 * rng.below(20);
    const int k = 1 + static_cast<int>(rng.below(2));
    Rng trial_rng(derive_seed(91, trial, 0));
    const PlantedInstance inst = plant(ModelParams{n, k, 2.0, 0}, trial_rng);
    const PruningOutcome out = iterative_prune(inst.graph, k);
    const EdgeSet est = degree_estimator(inst.graph, k);
    CHECK(set_difference(est, out.identified_planted).empty());
    CHECK(set_difference(est, inst.h_star).empty());
  }
}

TEST_CASE("the core is invariant under vertex-processing order") {
  Rng rng(92);
  int nonempty_cores = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 10 + 2 * rng.below(21);  // n <= 50
    const int k = 1 + static_cast<int>(rng.below(2));
    Rng trial_rng(derive_seed(92, trial, 0));
    const double lambda = 0.5 + 2.5 * trial_rng.next_double();
    const PlantedInstance inst = plant(ModelParams{n, k, lambda, 0}, trial_rng);
    const PruningOutcome base = iterative_prune(inst.graph, k);
    const EdgeSet base_core = set_union(base.core.red(), base.core.blue());
    if (!base_core.empty()) ++nonempty_cores;

    std::vector<VertexId> perm(n);
    std::iota(perm.begin(), perm.end(), VertexId{0});
    for (int p = 0; p < 20; ++p) {
      trial_rng.shuffle(perm);
      const BicoloredGraph shuffled = relabel(inst.graph, perm);
      const PruningOutcome out = iterative_prune(shuffled, k);
      const EdgeSet core = set_union(out.core.red(), out.core.blue());
      CHECK(unrelabel(core, perm, n) == base_core);
    }
  }
  CHECK(nonempty_cores > 50);  // the invariance check must see real cores
}
