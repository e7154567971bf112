#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "proxima/errors.hpp"
#include "proxima/real.hpp"
#include "proxima/vector.hpp"

namespace proxima {

/// Constants (C, q) with delta(eps) >= C * eps^q on (0, 2].
struct PowerTypeConstants {
  double c = 0.0;
  double q = 2.0;
};

/// Power-type constants of the canonical l_p norm:
/// (1 / (p 2^p), p) for p >= 2 and ((p - 1) / 8, 2) for 1 < p < 2.
PowerTypeConstants power_type_constants(double p);

/// Finite-dimensional l_p^n, p > 1.
class LpSpace {
 public:
  LpSpace(std::size_t dim, double p);

  std::size_t dim() const { return dim_; }
  double p() const { return p_; }
  PowerTypeConstants constants() const { return power_type_constants(p_); }

  template <Scalar Real>
  Real norm(const BasicVector<Real>& v) const;

  template <Scalar Real>
  Real distance(const BasicVector<Real>& a, const BasicVector<Real>& b) const {
    return norm(a - b);
  }

  friend bool operator==(const LpSpace&, const LpSpace&) = default;

 private:
  std::size_t dim_;
  double p_;
};

template <Scalar Real>
Real LpSpace::norm(const BasicVector<Real>& v) const {
  using std::abs;
  using std::pow;
  if (v.size() != dim_) {
    throw InputError("vector of length " + std::to_string(v.size()) +
                     " does not belong to a space of dimension " + std::to_string(dim_));
  }
  // Scale by the largest magnitude so |v_i|^p cannot overflow for large p.
  Real scale(0);
  for (const auto& c : v.coords()) scale = std::max<Real>(scale, abs(c));
  if (scale == Real(0)) return Real(0);
  const Real p(p_);
  Real sum(0);
  for (const auto& c : v.coords()) sum += pow(abs(c) / scale, p);
  return scale * pow(sum, Real(1) / p);
}

template <Scalar Real>
Real lp_norm(const LpSpace& space, const BasicVector<Real>& v) {
  return space.norm(v);
}

/// Modulus of convexity of the canonical l_p norm at eps in (0, 2].
/// Closed form for p >= 2; for 1 < p < 2 the root in [0, 1] of
/// (1 - delta + eps/2)^p + |1 - delta - eps/2|^p = 2, found by bisection.
double modulus_of_convexity(double p, double eps);

/// Left side minus right side of the implicit equation for 1 < p < 2.
double modulus_equation_residual(double p, double eps, double delta);

inline constexpr double kModulusBisectionTolerance = 1e-12;
inline constexpr int kModulusBisectionCap = 200;

/// Upper bound (t / C)^(1/q) on the inverse modulus delta^{-1}(t).
template <Scalar Real>
Real inverse_modulus_bound(const Real& t, const PowerTypeConstants& consts) {
  using std::pow;
  if (!(t >= Real(0))) throw InputError("inverse_modulus_bound: t must be nonnegative");
  if (t == Real(0)) return Real(0);
  return pow(t / Real(consts.c), Real(1) / Real(consts.q));
}

enum class ConvexityStatus { Holds, Violated, PreconditionFailed };

struct ConvexityCheck {
  ConvexityStatus status = ConvexityStatus::Holds;
  double lhs = 0.0;  // ||(x+y)/2 - z||
  double rhs = 0.0;  // (1 - delta(r/R)) R
  std::string diagnostic;

  bool holds() const { return status == ConvexityStatus::Holds; }
};

/// Checks ||(x+y)/2 - z|| <= (1 - delta_p(r/R)) R, relative tolerance 1e-9.
/// Precondition failures (||x-z|| > R, ||y-z|| > R, ||x-y|| < r, r outside
/// [0, 2R]) are reported as PreconditionFailed, not as violations.
ConvexityCheck check_convexity_inequality(const LpSpace& space, const Vector& x,
                                          const Vector& y, const Vector& z, double radius,
                                          double separation);

}  // namespace proxima
