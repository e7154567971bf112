#include "proxima/norms.hpp"

#include <cmath>
#include <sstream>

namespace proxima {

namespace {

void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InputError("exponent p must be a finite number > 1");
  }
}

}  // namespace

PowerTypeConstants power_type_constants(double p) {
  require_exponent(p);
  if (p >= 2.0) return {1.0 / (p * std::pow(2.0, p)), p};
  return {(p - 1.0) / 8.0, 2.0};
}

LpSpace::LpSpace(std::size_t dim, double p) : dim_(dim), p_(p) {
  if (dim == 0) throw InputError("space dimension must be >= 1");
  require_exponent(p);
}

double modulus_equation_residual(double p, double eps, double delta) {
  // (1 + a)^p - 1 + (1 + b)^p - 1, with a and b formed directly so the
  // leading terms cancel cleanly as eps -> 2.
  const double s = 1.0 - delta;
  const double h = eps / 2.0 - 1.0;
  const double a = s + h;
  const double b = (s <= eps / 2.0) ? h - s : s - (eps / 2.0 + 1.0);
  auto pow_minus_one = [p](double t) { return std::expm1(p * std::log1p(t)); };
  return pow_minus_one(a) + pow_minus_one(b);
}

double modulus_of_convexity(double p, double eps) {
  require_exponent(p);
  if (!(eps > 0.0 && eps <= 2.0)) throw InputError("eps must lie in (0, 2]");

  if (p >= 2.0) {
    // 1 - (1 - u)^(1/p) without cancellation for small u.
    const double u = std::pow(eps / 2.0, p);
    if (u >= 1.0) return 1.0;
    return -std::expm1(std::log1p(-u) / p);
  }

  // Residual is strictly decreasing in delta on [0, 1], >= 0 at 0 and <= 0 at 1.
  // Bisect until the bracket collapses to adjacent doubles; near eps -> 0 the
  // modulus and its power-type bound agree to O(eps^4), far below 1e-12.
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < kModulusBisectionCap; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (modulus_equation_residual(p, eps, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo > kModulusBisectionTolerance) {
    throw NumericalError("modulus_of_convexity: bisection did not converge");
  }
  return 0.5 * (lo + hi);
}

ConvexityCheck check_convexity_inequality(const LpSpace& space, const Vector& x,
                                          const Vector& y, const Vector& z, double radius,
                                          double separation) {
  ConvexityCheck out;
  const double dxz = space.distance(x, z);
  const double dyz = space.distance(y, z);
  const double dxy = space.distance(x, y);
  constexpr double kRel = 1e-9;

  std::ostringstream why;
  if (!(radius > 0.0)) {
    why << "R must be positive";
  } else if (separation < 0.0 || separation > 2.0 * radius * (1.0 + kRel)) {
    why << "r=" << separation << " outside [0, 2R]";
  } else if (dxz > radius * (1.0 + kRel)) {
    why << "||x - z|| = " << dxz << " exceeds R = " << radius;
  } else if (dyz > radius * (1.0 + kRel)) {
    why << "||y - z|| = " << dyz << " exceeds R = " << radius;
  } else if (dxy < separation * (1.0 - kRel)) {
    why << "||x - y|| = " << dxy << " is below r = " << separation;
  }
  if (!why.str().empty()) {
    out.status = ConvexityStatus::PreconditionFailed;
    out.diagnostic = why.str();
    return out;
  }

  Vector mid = 0.5 * (x + y);
  out.lhs = space.distance(mid, z);
  // delta_p has unbounded slope at 2 for large p; evaluating it at r (1 - 1e-9)
  // keeps round-off in ||x - y|| from forcing the right side to 0.
  const double ratio = std::clamp(separation * (1.0 - kRel) / radius, 0.0, 2.0);
  const double delta = ratio > 0.0 ? modulus_of_convexity(space.p(), ratio) : 0.0;
  out.rhs = (1.0 - delta) * radius;
  if (out.lhs <= out.rhs + kRel * std::max(radius, out.rhs)) {
    out.status = ConvexityStatus::Holds;
  } else {
    out.status = ConvexityStatus::Violated;
    std::ostringstream msg;
    msg << "||(x+y)/2 - z|| = " << out.lhs << " > (1 - delta(r/R)) R = " << out.rhs;
    out.diagnostic = msg.str();
  }
  return out;
}

}  // namespace proxima
