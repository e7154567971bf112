#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "proxima/norms.hpp"
#include "proxima/vector.hpp"

namespace proxima {

/// Outcome of one named property run by `verify`.
struct PropertyResult {
  std::string suite;
  std::string name;
  bool passed = true;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 42;
  /// Replaces the declared contraction coefficient of every map (negative control).
  std::optional<double> declared_k;
  std::size_t samples = 1000;        // points / pairs per sampled check
  std::size_t triples = 10000;       // convexity-inequality triples per p
  std::size_t random_starts = 10;    // starting points per (lambda, p) in soundness audits
  std::size_t stop_starts = 2;       // starting points per (lambda, p) in stop checks
};

enum class Suite { Norms, Cyclic, Bounds, Tables, All };

Suite parse_suite(std::string_view name);

/// The exponents and contraction coefficients every suite sweeps.
const std::vector<double>& suite_exponents();
const std::vector<double>& suite_lambdas();

std::vector<PropertyResult> run_suite(Suite suite, const SuiteOptions& options);

/// A random (x, y, z, R, r) with ||x - z|| <= R, ||y - z|| <= R, ||x - y|| >= r, r in [0, 2R].
struct ConvexityTriple {
  Vector x;
  Vector y;
  Vector z;
  double radius = 1.0;
  double separation = 0.0;
};

ConvexityTriple random_admissible_triple(const LpSpace& space, std::mt19937_64& rng);

}  // namespace proxima
