#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "proxima/errors.hpp"
#include "proxima/norms.hpp"
#include "proxima/real.hpp"
#include "proxima/vector.hpp"

namespace proxima {

/// Axis-aligned window used for rejection sampling of a (possibly unbounded) set.
struct SamplingBox {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// A cyclic map T on A u B together with its declared contraction
/// coefficient k and set distance d = dist(A, B). Validators audit the
/// declaration by sampling; nothing here infers k or d.
template <Scalar Real>
struct CyclicMap {
  using Point = BasicVector<Real>;

  std::string name;
  LpSpace space{1, 2.0};
  std::function<Point(const Point&)> map;
  std::function<bool(const Point&)> in_a;
  std::function<bool(const Point&)> in_b;
  double k = 0.5;
  double d = 0.0;
  SamplingBox box_a;
  SamplingBox box_b;
  /// Exact best proximity point in A when it is known in closed form.
  std::optional<Vector> known_best_proximity;

  void validate() const;
};

template <Scalar Real>
void CyclicMap<Real>::validate() const {
  if (!map || !in_a || !in_b) throw InputError("cyclic map '" + name + "' is incomplete");
  if (!(k > 0.0 && k < 1.0)) throw InputError("contraction coefficient k must lie in (0, 1)");
  if (!(d >= 0.0) || !std::isfinite(d)) throw InputError("set distance d must be >= 0");
}

template <Scalar Real>
BasicVector<Real> apply_map(const CyclicMap<Real>& m, const BasicVector<Real>& x) {
  if (x.size() != m.space.dim()) {
    throw InputError("apply_map: point has dimension " + std::to_string(x.size()) +
                     ", map expects " + std::to_string(m.space.dim()));
  }
  return m.map(x);
}

struct Example1Params {
  double lambda = 0.5;
  double p = 2.0;
};

namespace detail {
template <Scalar Real>
Real sign(const Real& x) {
  if (x > Real(0)) return Real(1);
  if (x < Real(0)) return Real(-1);
  return Real(0);
}
}  // namespace detail

/// The planar example: T(x, y) = (-((1 - lambda) sign(x) + lambda x), -lambda y)
/// on the cones A = {x >= 1, |y| <= x - 1} and B = -A in l_p^2, with
/// k = lambda, d = 2 and best proximity pair (e1, -e1).
template <Scalar Real>
CyclicMap<Real> make_example1(const Example1Params& params) {
  if (!(params.lambda > 0.0 && params.lambda < 1.0)) {
    throw InputError("example1: lambda must lie in (0, 1)");
  }
  CyclicMap<Real> m;
  m.name = "example1";
  m.space = LpSpace(2, params.p);
  const Real lambda(params.lambda);
  const Real one_minus = Real(1) - lambda;
  m.map = [lambda, one_minus](const BasicVector<Real>& v) {
    return BasicVector<Real>{-(one_minus * detail::sign(v[0]) + lambda * v[0]), -(lambda * v[1])};
  };
  m.in_a = [](const BasicVector<Real>& v) {
    return v[1] - v[0] + Real(1) <= Real(0) && v[1] + v[0] - Real(1) >= Real(0);
  };
  m.in_b = [](const BasicVector<Real>& v) {
    return v[1] - v[0] - Real(1) >= Real(0) && v[1] + v[0] + Real(1) <= Real(0);
  };
  m.k = params.lambda;
  m.d = 2.0;
  m.box_a = {{1.0, -1000.0}, {1000.0, 1000.0}};
  m.box_b = {{-1000.0, -1000.0}, {-1.0, 1000.0}};
  m.known_best_proximity = Vector{1.0, 0.0};
  return m;
}

/// Deterministic rejection sampler for a set given by predicate + box.
class SetSampler {
 public:
  static constexpr int kRetryCap = 100000;

  explicit SetSampler(std::uint64_t seed) : rng_(seed) {}

  template <Scalar Real>
  BasicVector<Real> draw(const SamplingBox& box,
                         const std::function<bool(const BasicVector<Real>&)>& member) {
    if (box.lower.size() != box.upper.size() || box.lower.empty()) {
      throw ConfigurationError("sampling box is malformed");
    }
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
      BasicVector<Real> v(box.lower.size());
      for (std::size_t i = 0; i < box.lower.size(); ++i) {
        std::uniform_real_distribution<double> coord(box.lower[i], box.upper[i]);
        v[i] = Real(coord(rng_));
      }
      if (member(v)) return v;
    }
    throw ConfigurationError("sampler did not hit the set within the retry cap");
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct CyclicityWitness {
  Vector point;
  Vector image;
  bool from_a = true;  // point was drawn from A (image should be in B)
};

struct CyclicityReport {
  std::size_t samples_per_set = 0;
  std::vector<CyclicityWitness> violations;
  bool passed() const { return violations.empty(); }
};

/// Checks T(A) in B and T(B) in A on sample_count draws from each set.
CyclicityReport verify_cyclicity(const CyclicMap<double>& m, std::size_t sample_count,
                                 std::uint64_t seed);

struct ContractionReport {
  std::size_t pairs = 0;
  /// max over pairs of ||Tx - Ty|| - (k ||x - y|| + (1 - k) d)
  double max_violation = -INFINITY;
  Vector worst_x;
  Vector worst_y;
  std::size_t failures = 0;
  bool passed() const { return failures == 0; }
};

/// Checks ||Tx - Ty|| <= k ||x - y|| + (1 - k) d on sampled x in A, y in B;
/// a pair fails when the excess is above 1e-9 (1 + ||x - y||).
ContractionReport verify_contraction(const CyclicMap<double>& m, std::size_t sample_count,
                                     std::uint64_t seed);

struct Lemma21Row {
  std::size_t n = 0;
  double gap = 0.0;       // ||T^n x - T^{n+1} x|| - d
  double envelope = 0.0;  // k^n (||x - Tx|| - d)
  bool holds = true;
};

struct Lemma21Report {
  std::vector<Lemma21Row> rows;
  bool separation_ok = true;  // every displacement >= d - 1e-9
  bool passed() const {
    if (!separation_ok) return false;
    for (const auto& r : rows) {
      if (!r.holds) return false;
    }
    return true;
  }
};

/// Walks the orbit of x0 and checks the geometric decay of the displacement
/// excess ||T^n x - T^{n+1} x|| - d <= k^n (||x - Tx|| - d) for n = 0..n_max.
template <Scalar Real>
Lemma21Report lemma21_check(const CyclicMap<Real>& m, const BasicVector<Real>& x0,
                            std::size_t n_max) {
  using std::abs;
  using std::pow;
  m.validate();
  if (!m.in_a(x0) && !m.in_b(x0)) throw InputError("lemma21_check: x0 is outside A u B");
  if (n_max < 1) throw InputError("lemma21_check: n_max must be >= 1");

  const Real d(m.d);
  const Real k(m.k);
  constexpr double kTol = 1e-9;

  Lemma21Report report;
  BasicVector<Real> current = x0;
  BasicVector<Real> next = apply_map(m, current);
  const Real initial_gap = m.space.distance(current, next) - d;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const Real displacement = m.space.distance(current, next);
    const Real gap = displacement - d;
    const Real envelope = pow(k, Real(static_cast<double>(n))) * initial_gap;
    Lemma21Row row;
    row.n = n;
    row.gap = to_double(gap);
    row.envelope = to_double(envelope);
    row.holds = gap <= envelope + Real(kTol) * (Real(1) + abs(envelope) + d);
    report.rows.push_back(row);
    if (displacement < d - Real(kTol)) report.separation_ok = false;
    current = next;
    next = apply_map(m, current);
  }
  return report;
}

}  // namespace proxima
