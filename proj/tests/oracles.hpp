#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library; everything is evaluated in long double from the definitions.

#include <cmath>
#include <vector>

namespace oracles {

inline long double lp_norm(const std::vector<long double>& v, long double p) {
  long double sum = 0.0L;
  for (long double c : v) sum += std::pow(std::fabs(c), p);
  return std::pow(sum, 1.0L / p);
}

/// Root in [0, 1] of (1 - d + e/2)^p + |1 - d - e/2|^p = 2, plain bisection.
inline long double implicit_modulus(long double p, long double eps) {
  auto f = [&](long double d) {
    return std::pow(1.0L - d + eps / 2.0L, p) + std::pow(std::fabs(1.0L - d - eps / 2.0L), p) - 2.0L;
  };
  long double lo = 0.0L, hi = 1.0L;
  for (int i = 0; i < 120; ++i) {
    const long double mid = (lo + hi) / 2.0L;
    (f(mid) > 0.0L ? lo : hi) = mid;
  }
  return (lo + hi) / 2.0L;
}

/// Planar example map, straight from its formula.
inline std::vector<long double> example1(const std::vector<long double>& v, long double lambda) {
  const long double s = v[0] > 0 ? 1.0L : (v[0] < 0 ? -1.0L : 0.0L);
  return {-((1.0L - lambda) * s + lambda * v[0]), -lambda * v[1]};
}

/// Right side of the a priori estimate, evaluated term by term.
inline long double apriori(long double D, long double d, long double k, long double C,
                           long double q, int n) {
  return D / (1.0L - std::pow(k * k, 1.0L / q)) * std::pow((D - d) / (C * d), 1.0L / q) *
         std::pow(std::pow(k, 1.0L / q), 2.0L * n);
}

inline long double aposteriori(long double P, long double d, long double k, long double C,
                               long double q) {
  return P / (1.0L - std::pow(k * k, 1.0L / q)) * std::pow((P - d) / (C * d), 1.0L / q) *
         std::pow(k, 1.0L / q);
}

}  // namespace oracles
