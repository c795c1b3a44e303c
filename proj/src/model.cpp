#include "pkf/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

#include "pkf/errors.hpp"

namespace pkf {

void ModelParams::validate() const {
  if (k < 1) throw std::domain_error("ModelParams: k must be >= 1");
  if (n == 0 || static_cast<std::size_t>(k) >= n) {
    throw std::domain_error("ModelParams: need k < n");
  }
  if ((n * static_cast<std::size_t>(k)) % 2 != 0) {
    throw std::domain_error("ModelParams: n*k must be even");
  }
  if (!(lambda >= 0.0)) throw std::domain_error("ModelParams: lambda must be >= 0");
  if (lambda > static_cast<double>(n)) {
    throw std::domain_error("ModelParams: lambda/n must be <= 1");
  }
}

EdgeSet sample_k_regular(std::size_t n, int k, Rng& rng) {
  if (k < 1 || static_cast<std::size_t>(k) >= n) {
    throw std::domain_error("sample_k_regular: need 1 <= k < n");
  }
  const std::size_t stubs_count = n * static_cast<std::size_t>(k);
  if (stubs_count % 2 != 0) {
    throw std::domain_error("sample_k_regular: n*k must be even");
  }

  std::vector<VertexId> stubs(stubs_count);
  for (std::size_t i = 0; i < stubs_count; ++i) {
    stubs[i] = static_cast<VertexId>(i / static_cast<std::size_t>(k));
  }

  std::vector<Edge> edges(stubs_count / 2);
  std::vector<std::uint64_t> keys;
  for (int attempt = 0; attempt < kRegularRetryBudget; ++attempt) {
    rng.shuffle(stubs);
    bool ok = true;
    for (std::size_t i = 0; i < stubs_count; i += 2) {
      if (stubs[i] == stubs[i + 1]) {
        ok = false;
        break;
      }
      edges[i / 2] = Edge(stubs[i], stubs[i + 1]);
    }
    if (ok && k > 1) {
      keys.clear();
      keys.reserve(edges.size());
      for (const Edge& e : edges) {
        keys.push_back(static_cast<std::uint64_t>(e.u) * n + e.v);
      }
      std::sort(keys.begin(), keys.end());
      ok = std::adjacent_find(keys.begin(), keys.end()) == keys.end();
    }
    if (ok) return EdgeSet::from_unsorted(std::move(edges));
  }
  throw RetryError("sample_k_regular: rejection budget of " +
                   std::to_string(kRegularRetryBudget) + " pairings exhausted");
}

namespace {

// Pairs of [0,n) in lexicographic order; row u starts at u*(n-1) - u*(u-1)/2.
std::uint64_t row_start(std::uint64_t u, std::uint64_t n) {
  return u * (n - 1) - u * (u - 1) / 2;
}

Edge pair_from_index(std::uint64_t idx, std::uint64_t n) {
  double nd = static_cast<double>(n);
  double guess = nd - 0.5 - std::sqrt((nd - 0.5) * (nd - 0.5) - 2.0 * static_cast<double>(idx));
  std::uint64_t u = guess <= 0.0 ? 0 : static_cast<std::uint64_t>(guess);
  if (u >= n - 1) u = n - 2;
  while (u + 1 < n - 1 && row_start(u + 1, n) <= idx) ++u;
  while (u > 0 && row_start(u, n) > idx) --u;
  const std::uint64_t v = u + 1 + (idx - row_start(u, n));
  return Edge(static_cast<VertexId>(u), static_cast<VertexId>(v));
}

}  // namespace

EdgeSet sample_background(std::size_t n, double lambda, Rng& rng) {
  if (!(lambda >= 0.0)) throw std::domain_error("sample_background: lambda < 0");
  const double p = lambda / static_cast<double>(n);
  if (p > 1.0) throw std::domain_error("sample_background: lambda/n > 1");
  std::vector<Edge> out;
  if (p == 0.0 || n < 2) return EdgeSet::from_unsorted(std::move(out));
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (p >= 1.0) {
    out.reserve(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) out.push_back(pair_from_index(idx, n));
    return EdgeSet::from_unsorted(std::move(out));
  }
  out.reserve(static_cast<std::size_t>(p * static_cast<double>(total) * 1.2) + 16);
  std::uint64_t idx = rng.geometric_skip(p);
  while (idx < total) {
    out.push_back(pair_from_index(idx, n));
    const std::uint64_t skip = rng.geometric_skip(p);
    if (skip == Rng::huge_skip() || total - idx - 1 <= skip) break;
    idx += 1 + skip;
  }
  return EdgeSet::from_unsorted(std::move(out));
}

PlantedInstance plant(const ModelParams& params, Rng& rng) {
  params.validate();
  EdgeSet h_star = sample_k_regular(params.n, params.k, rng);
  EdgeSet g0 = sample_background(params.n, params.lambda, rng);
  EdgeSet blue = set_difference(g0, h_star);
  BicoloredGraph g(params.n, h_star, std::move(blue));
  return PlantedInstance{std::move(g), std::move(h_star)};
}

PlantedInstance plant_hamiltonian(std::size_t n, double lambda, Rng& rng) {
  if (n < 3) throw std::domain_error("plant_hamiltonian: need n >= 3");
  if (lambda > static_cast<double>(n) || !(lambda >= 0.0)) {
    throw std::domain_error("plant_hamiltonian: lambda/n must be in [0,1]");
  }
  std::vector<VertexId> perm(n);
  std::iota(perm.begin(), perm.end(), VertexId{0});
  rng.shuffle(perm);
  std::vector<Edge> cyc;
  cyc.reserve(n);
  for (std::size_t i = 0; i + 1 < n; ++i) cyc.emplace_back(perm[i], perm[i + 1]);
  cyc.emplace_back(perm[n - 1], perm[0]);
  EdgeSet h_star = EdgeSet::from_unsorted(std::move(cyc));
  EdgeSet g0 = sample_background(n, lambda, rng);
  EdgeSet blue = set_difference(g0, h_star);
  BicoloredGraph g(n, h_star, std::move(blue));
  return PlantedInstance{std::move(g), std::move(h_star)};
}

}  // namespace pkf
