#pragma once

#include <cstddef>
#include <cstdint>

#include "pkf/graph.hpp"
#include "pkf/rng.hpp"

namespace pkf {

struct ModelParams {
  std::size_t n{0};
  int k{1};
  double lambda{0.0};
  std::uint64_t seed{0};

  // n*k even, 1 <= k < n, lambda/n <= 1.
  void validate() const;
};

inline constexpr int kRegularRetryBudget = 10000;

// Uniform simple k-regular graph on [0,n) by the configuration model: pair the
// n*k half-edge stubs uniformly and reject the whole pairing on any self-loop
// or repeated pair. For k = 1 a pairing is always simple, so the first draw is
// accepted. Throws RetryError after kRegularRetryBudget rejected pairings.
EdgeSet sample_k_regular(std::size_t n, int k, Rng& rng);

// Erdos-Renyi draw over all C(n,2) vertex pairs with p = lambda/n, visited by
// geometric skipping so the cost is proportional to the number of hits.
EdgeSet sample_background(std::size_t n, double lambda, Rng& rng);

struct PlantedInstance {
  BicoloredGraph graph;
  EdgeSet h_star;
};

// H* = sample_k_regular, background = sample_background; a background edge
// that coincides with a planted pair is absorbed into the red set (the
// observed simple graph is their union either way).
PlantedInstance plant(const ModelParams& params, Rng& rng);

// H* is a uniformly random Hamiltonian cycle (random vertex permutation,
// consecutive edges plus wrap-around); background as in plant. Requires n >= 3.
PlantedInstance plant_hamiltonian(std::size_t n, double lambda, Rng& rng);

}  // namespace pkf
