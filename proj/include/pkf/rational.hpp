#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace pkf {

// Exact ratio of 64-bit integers, stored reduced with a positive denominator.
// Error metrics are defined as quotients of set cardinalities; keeping them
// exact lets tests compare counts instead of floats.
struct Ratio {
  std::int64_t num{0};
  std::int64_t den{1};

  Ratio() = default;

  Ratio(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::domain_error("Ratio: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  friend bool operator==(const Ratio&, const Ratio&) = default;
};

}  // namespace pkf
