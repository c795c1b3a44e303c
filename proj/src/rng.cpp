#include "pkf/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace pkf {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b) {
  std::uint64_t h = mix64(master ^ (0x9E3779B97F4A7C15ull * (a + 1)));
  return mix64(h ^ (0xBF58476D1CE4E5B9ull * (b + 1)));
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

Rng::Rng(std::uint64_t seed) {
  // Seed the four words through a splitmix64 walk; the all-zero state is
  // unreachable because mix64 is applied to distinct increments.
  std::uint64_t s = seed;
  for (auto& word : s_) {
    s += 0x9E3779B97F4A7C15ull;
    word = mix64(s);
  }
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_double_open() {
  for (;;) {
    const double u = next_double();
    if (u > 0.0) return u;
  }
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::domain_error("Rng::below: n must be positive");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x < limit) return x % n;
  }
}

std::uint64_t Rng::poisson_inversion(double lambda) {
  const double q = std::exp(-lambda);
  double p = q;
  double cum = q;
  const double u = next_double();
  std::uint64_t x = 0;
  while (u >= cum) {
    ++x;
    p *= lambda / static_cast<double>(x);
    cum += p;
    if (p <= 0.0) break;  // exhausted double precision in the far tail
  }
  return x;
}

std::uint64_t Rng::poisson(double lambda) {
  if (!(lambda >= 0.0)) throw std::domain_error("poisson: lambda < 0");
  if (lambda == 0.0) return 0;
  if (lambda < kPoissonSplit) return poisson_inversion(lambda);
  return poisson(lambda / 2) + poisson(lambda - lambda / 2);
}

std::uint64_t Rng::binomial_inversion(std::uint64_t m, double p) {
  const double md = static_cast<double>(m);
  double prob = std::exp(md * std::log1p(-p));  // P(X = 0)
  double cum = prob;
  const double u = next_double();
  std::uint64_t x = 0;
  const double odds = p / (1.0 - p);
  while (u >= cum && x < m) {
    prob *= odds * (md - static_cast<double>(x)) / (static_cast<double>(x) + 1.0);
    ++x;
    cum += prob;
    if (prob <= 0.0) break;
  }
  return x;
}

std::uint64_t Rng::binomial(std::uint64_t m, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial: p outside [0,1]");
  if (m == 0 || p == 0.0) return 0;
  if (p == 1.0) return m;
  const double mean = static_cast<double>(m) * p;
  if (mean <= kBinomialSplit || m < 4) return binomial_inversion(m, p);
  const std::uint64_t half = m / 2;
  return binomial(half, p) + binomial(m - half, p);
}

std::uint64_t Rng::geometric_skip(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("geometric_skip: p outside [0,1]");
  if (p == 0.0) return huge_skip();
  if (p == 1.0) return 0;
  const double u = next_double_open();
  const double skips = std::floor(std::log(u) / std::log1p(-p));
  if (skips >= 9.0e18) return huge_skip();
  return static_cast<std::uint64_t>(skips);
}

}  // namespace pkf
