#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace pkf {

// splitmix64 finalizer step.
std::uint64_t mix64(std::uint64_t x);

// Seed-splitting rule used by every multi-trial harness:
//   child = mix64(mix64(master ^ C1*(a+1)) ^ C2*(b+1))
// with C1 = 0x9E3779B97F4A7C15 and C2 = 0xBF58476D1CE4E5B9. A trial's stream
// depends only on (master, a, b), never on scheduling or worker count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b);

// xoshiro256** generator with hand-rolled distributions. The std::*
// distributions are implementation-defined, which would tie stored seeds to
// one standard library; everything here is pinned algorithmically.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0,1) with 53-bit resolution.
  double next_double();

  // Uniform in (0,1); safe as a log() argument.
  double next_double_open();

  // Uniform in [0,n), unbiased via rejection. n must be positive.
  std::uint64_t below(std::uint64_t n);

  // Inversion by sequential search below kPoissonSplit, recursive halving
  // above it (a Poisson splits into two independent halves). No normal
  // approximation anywhere.
  std::uint64_t poisson(double lambda);

  // Inversion when the mean is small, recursive splitting of the trial count
  // otherwise. Exact distribution in both regimes.
  std::uint64_t binomial(std::uint64_t m, double p);

  // Number of misses before the next hit of a Bernoulli(p) stream,
  // floor(log(u)/log(1-p)). Returns huge_skip() when p == 0.
  std::uint64_t geometric_skip(double p);

  static constexpr std::uint64_t huge_skip() { return ~std::uint64_t{0}; }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static constexpr double kPoissonSplit = 30.0;
  static constexpr double kBinomialSplit = 64.0;

  std::uint64_t poisson_inversion(double lambda);
  std::uint64_t binomial_inversion(std::uint64_t m, double p);

  std::uint64_t s_[4];
};

}  // namespace pkf
