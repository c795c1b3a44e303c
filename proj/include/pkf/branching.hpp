#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pkf/rng.hpp"

namespace pkf {

// Offspring generating function value exp(-lambda (1 - x^k)); increasing and
// convex on [0,1].
double phi(double x, double lambda, int k);

// Finite-size counterpart (1 - lambda/n (1 - x^k))^m; converges to
// exp(-alpha lambda (1 - x^k)) as n -> infinity with m/n -> alpha.
double phi_n(double x, double lambda, int k, std::uint64_t m, double n);

struct ExtinctionSolution {
  double rho{1.0};
  std::vector<double> trajectory;  // rho_0 = 0, rho_t = phi(rho_{t-1})
  std::size_t iterations{0};
  double residual{0.0};  // |phi(rho) - rho|
};

// The first T+1 iterates of the extinction recursion, no root polishing.
ExtinctionSolution extinction_recursion(double lambda, int k, std::size_t T);

// Smallest solution of rho = phi(rho) in [0,1]. Returns exactly 1 when
// k*lambda <= 1 (iterating would only reach 1 asymptotically). Otherwise
// iterates from 0 until successive change <= tol, then polishes by bisection
// on phi(x) - x until the residual is <= tol. Inside the slow band
// 1 < k*lambda < 1.05 the contraction factor approaches 1, so the solver
// moves to bisection after a short fixed burn-in.
ExtinctionSolution extinction_probability(double lambda, int k, double tol = 1e-12);

// (mu^2 - mu) / (mu^2 - mu + sigma2) for mu > 1.
double survival_lower_bound(double mu, double sigma2);

struct OffspringSpec {
  enum class Kind { Poisson, KTimesBinomial };
  Kind kind{Kind::Poisson};
  double lambda{0.0};      // Poisson
  int k{1};                // multiplier for KTimesBinomial
  std::uint64_t m{0};      // binomial trials
  double p{0.0};           // binomial success probability

  static OffspringSpec poisson(double lambda);
  static OffspringSpec k_times_binomial(int k, std::uint64_t m, double p);

  double mean() const;
  double variance() const;
  std::uint64_t draw(Rng& rng) const;
};

struct BranchingRun {
  bool survived{false};
  bool truncated{false};  // population cap hit; counted as survival
  std::vector<std::uint64_t> generation_sizes;  // Z_0 = 1 onward
};

BranchingRun simulate_branching(const OffspringSpec& offspring,
                                std::size_t max_generations, Rng& rng,
                                std::uint64_t population_cap = 1000);

// (1 - rho)^2: the predicted fraction of planted edges surviving pruning.
double core_fraction_prediction(double lambda, int k, double tol = 1e-12);

}  // namespace pkf
