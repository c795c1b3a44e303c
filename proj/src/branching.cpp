#include "pkf/branching.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pkf/errors.hpp"

namespace pkf {

namespace {

void check_phi_args(double x, double lambda, int k) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("phi: x outside [0,1]");
  if (!(lambda >= 0.0)) throw std::domain_error("phi: lambda must be >= 0");
  if (k < 1) throw std::domain_error("phi: k must be >= 1");
}

double pow_int(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

double phi(double x, double lambda, int k) {
  check_phi_args(x, lambda, k);
  return std::exp(-lambda * (1.0 - pow_int(x, k)));
}

double phi_n(double x, double lambda, int k, std::uint64_t m, double n) {
  check_phi_args(x, lambda, k);
  if (!(n > 0.0) || lambda / n > 1.0) {
    throw std::domain_error("phi_n: need lambda/n <= 1");
  }
  if (m == 0) return 1.0;
  const double base = 1.0 - (lambda / n) * (1.0 - pow_int(x, k));
  return std::exp(static_cast<double>(m) * std::log(base));
}

ExtinctionSolution extinction_recursion(double lambda, int k, std::size_t T) {
  check_phi_args(0.0, lambda, k);
  ExtinctionSolution sol;
  sol.trajectory.reserve(T + 1);
  double x = 0.0;
  sol.trajectory.push_back(x);
  for (std::size_t t = 0; t < T; ++t) {
    x = phi(x, lambda, k);
    sol.trajectory.push_back(x);
  }
  sol.rho = x;
  sol.iterations = T;
  sol.residual = std::fabs(phi(x, lambda, k) - x);
  return sol;
}

ExtinctionSolution extinction_probability(double lambda, int k, double tol) {
  check_phi_args(0.0, lambda, k);
  if (!(tol > 0.0)) throw std::domain_error("extinction_probability: tol must be > 0");

  ExtinctionSolution sol;
  const double c = lambda * static_cast<double>(k);
  if (c <= 1.0) {
    sol.rho = 1.0;
    sol.trajectory = {0.0};
    sol.iterations = 0;
    sol.residual = 0.0;
    return sol;
  }

  const bool near_critical = c < 1.05;
  const std::size_t iter_cap = near_critical ? 1000 : 1000000;
  double x = 0.0;
  sol.trajectory.push_back(x);
  std::size_t iters = 0;
  while (iters < iter_cap) {
    const double next = phi(x, lambda, k);
    ++iters;
    if (sol.trajectory.size() < 10000) sol.trajectory.push_back(next);
    const double delta = next - x;
    x = next;
    if (!near_critical && delta <= tol) break;
  }
  sol.iterations = iters;

  // Bisection polish on g(t) = phi(t) - t over [x, hi] with g(x) >= 0; the
  // iterates approach the smallest fixed point from below, and g < 0 strictly
  // between it and 1 because c > 1.
  double lo = x;
  double hi = 1.0 - 1e-6;
  for (int expand = 0; expand < 40 && phi(hi, lambda, k) - hi >= 0.0; ++expand) {
    hi = 1.0 - (1.0 - hi) / 2.0;
  }
  if (phi(hi, lambda, k) - hi >= 0.0) {
    // No sign change representable; the iterate is the best available answer.
    sol.rho = lo;
    sol.residual = std::fabs(phi(lo, lambda, k) - lo);
    return sol;
  }
  for (int step = 0; step < 200; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid, lambda, k) - mid >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= tol && std::fabs(phi(lo, lambda, k) - lo) <= tol) break;
  }
  sol.rho = lo;
  sol.residual = std::fabs(phi(lo, lambda, k) - lo);
  return sol;
}

double survival_lower_bound(double mu, double sigma2) {
  if (!(mu > 1.0)) throw std::domain_error("survival_lower_bound: mu must be > 1");
  if (!(sigma2 >= 0.0)) throw std::domain_error("survival_lower_bound: sigma2 < 0");
  const double a = mu * mu - mu;
  return a / (a + sigma2);
}

OffspringSpec OffspringSpec::poisson(double lambda) {
  if (!(lambda >= 0.0)) throw std::domain_error("OffspringSpec: lambda < 0");
  OffspringSpec s;
  s.kind = Kind::Poisson;
  s.lambda = lambda;
  return s;
}

OffspringSpec OffspringSpec::k_times_binomial(int k, std::uint64_t m, double p) {
  if (k < 1) throw std::domain_error("OffspringSpec: k must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("OffspringSpec: p outside [0,1]");
  OffspringSpec s;
  s.kind = Kind::KTimesBinomial;
  s.k = k;
  s.m = m;
  s.p = p;
  return s;
}

double OffspringSpec::mean() const {
  if (kind == Kind::Poisson) return lambda;
  return static_cast<double>(k) * static_cast<double>(m) * p;
}

double OffspringSpec::variance() const {
  if (kind == Kind::Poisson) return lambda;
  const double kd = static_cast<double>(k);
  return kd * kd * static_cast<double>(m) * p * (1.0 - p);
}

std::uint64_t OffspringSpec::draw(Rng& rng) const {
  if (kind == Kind::Poisson) return rng.poisson(lambda);
  return static_cast<std::uint64_t>(k) * rng.binomial(m, p);
}

BranchingRun simulate_branching(const OffspringSpec& offspring,
                                std::size_t max_generations, Rng& rng,
                                std::uint64_t population_cap) {
  if (population_cap == 0) {
    throw std::domain_error("simulate_branching: population cap must be positive");
  }
  BranchingRun run;
  std::uint64_t z = 1;
  run.generation_sizes.push_back(z);
  for (std::size_t gen = 0; gen < max_generations; ++gen) {
    std::uint64_t next = 0;
    for (std::uint64_t i = 0; i < z; ++i) next += offspring.draw(rng);
    run.generation_sizes.push_back(next);
    z = next;
    if (z == 0) {
      run.survived = false;
      return run;
    }
    if (z > population_cap) {
      run.truncated = true;
      run.survived = true;
      return run;
    }
  }
  run.survived = z > 0;
  return run;
}

double core_fraction_prediction(double lambda, int k, double tol) {
  const double rho = extinction_probability(lambda, k, tol).rho;
  const double s = 1.0 - rho;
  return s * s;
}

}  // namespace pkf
