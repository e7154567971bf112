#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "proxima/cyclic.hpp"
#include "proxima/errors.hpp"
#include "proxima/norms.hpp"
#include "proxima/real.hpp"
#include "proxima/vector.hpp"

namespace proxima {

// ---------------------------------------------------------------------------
// Error bounds
// ---------------------------------------------------------------------------

namespace detail {

inline void require_bound_params(double d, double k) {
  if (!(d > 0.0)) throw InputError("error bounds need dist(A, B) > 0");
  if (!(k > 0.0 && k < 1.0)) throw InputError("contraction coefficient k must lie in (0, 1)");
}

/// displacement - d, with round-off below the true gap 0 clamped to 0.
template <Scalar Real>
Real displacement_excess(const Real& displacement, double d) {
  const Real excess = displacement - Real(d);
  if (excess >= Real(0)) return excess;
  if (excess >= Real(-1e-12 * std::max(1.0, d))) return Real(0);
  throw InputError("displacement " + std::to_string(to_double(displacement)) +
                   " is smaller than dist(A, B) = " + std::to_string(d));
}

}  // namespace detail

/// Evaluates both error bounds for fixed (d, k, C, q), caching the powers of k.
template <Scalar Real>
class BoundEvaluator {
 public:
  BoundEvaluator(double d, double k, const PowerTypeConstants& consts)
      : d_(d), inv_q_(Real(1) / Real(consts.q)), c_times_d_(Real(consts.c) * Real(d)) {
    using std::pow;
    detail::require_bound_params(d, k);
    ratio_ = pow(Real(k), Real(2) * inv_q_);
    k_root_ = pow(Real(k), inv_q_);
  }

  /// D / (1 - k^(2/q)) * ((D - d) / (C d))^(1/q); zero when D = d.
  Real prefactor(const Real& displacement) const {
    using std::pow;
    const Real excess = detail::displacement_excess(displacement, d_);
    if (excess == Real(0)) return Real(0);
    return displacement / (Real(1) - ratio_) * pow(excess / c_times_d_, inv_q_);
  }

  /// k^(2/q), the per-even-step contraction of the a priori bound.
  const Real& ratio() const { return ratio_; }

  Real apriori_from_prefactor(const Real& prefactor, std::size_t n) const {
    using std::pow;
    if (n < 1) throw InputError("apriori_bound: n must be >= 1");
    if (prefactor == Real(0)) return Real(0);
    return prefactor * pow(ratio_, Real(static_cast<double>(n)));
  }

  Real apriori(const Real& initial_displacement, std::size_t n) const {
    return apriori_from_prefactor(prefactor(initial_displacement), n);
  }

  Real aposteriori(const Real& last_displacement) const {
    const Real pre = prefactor(last_displacement);
    if (pre == Real(0)) return Real(0);
    return pre * k_root_;
  }

 private:
  double d_;
  Real inv_q_;
  Real c_times_d_;
  Real ratio_;
  Real k_root_;
};

/// A priori bound on ||xi - T^{2n} x|| from the initial displacement D = ||x - Tx||:
/// D / (1 - k^(2/q)) * ((D - d) / (C d))^(1/q) * k^(2n/q).
template <Scalar Real>
Real apriori_bound(const Real& initial_displacement, double d, double k,
                   const PowerTypeConstants& consts, std::size_t n) {
  return BoundEvaluator<Real>(d, k, consts).apriori(initial_displacement, n);
}

/// A posteriori bound on ||T^{2n} x - xi|| from the last odd-to-even
/// displacement P = ||T^{2n-1} x - T^{2n} x||:
/// P / (1 - k^(2/q)) * ((P - d) / (C d))^(1/q) * k^(1/q).
template <Scalar Real>
Real aposteriori_bound(const Real& last_displacement, double d, double k,
                       const PowerTypeConstants& consts) {
  return BoundEvaluator<Real>(d, k, consts).aposteriori(last_displacement);
}

/// Smallest even 2n (n >= 1) with apriori_bound(..., n) < eps. Closed-form
/// logarithm followed by direct evaluation at n and n - 1.
template <Scalar Real>
std::size_t apriori_steps_needed(const Real& initial_displacement, double d, double k,
                                 const PowerTypeConstants& consts, double eps) {
  using std::log;
  if (!(eps > 0.0)) throw InputError("apriori_steps_needed: eps must be > 0");
  const BoundEvaluator<Real> bounds(d, k, consts);
  const Real prefactor = bounds.prefactor(initial_displacement);
  if (prefactor == Real(0)) return 2;

  const double estimate = to_double(log(prefactor / Real(eps)) / -log(bounds.ratio()));
  if (!std::isfinite(estimate) || estimate > 1e15) {
    throw NumericalError("apriori_steps_needed: step estimate overflows");
  }
  std::size_t n = estimate < 1.0 ? 1 : static_cast<std::size_t>(std::floor(estimate)) + 1;
  const Real target(eps);
  while (bounds.apriori_from_prefactor(prefactor, n) >= target) ++n;
  while (n > 1 && bounds.apriori_from_prefactor(prefactor, n - 1) < target) --n;
  return 2 * n;
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

template <Scalar Real>
struct ErrorBudget {
  std::size_t step = 0;  // 2n
  Real apriori{0};
  Real aposteriori{0};
  /// The gap ||T^{2n-1}x - T^{2n}x|| - d is nonzero but within a few ulp of
  /// round-off, so the a posteriori value no longer certifies anything.
  bool gap_unresolved = false;
};

enum class TraceMode { Full, DisplacementsOnly };

/// Picard orbit x_0, x_1 = T x_0, ... with displacements ||x_n - x_{n+1}||
/// and the error budget at every even step >= 2.
template <Scalar Real>
struct IterationTrace {
  BasicVector<Real> x0;
  std::vector<BasicVector<Real>> iterates;  // empty in DisplacementsOnly mode
  BasicVector<Real> last;                   // x_{steps()}
  std::vector<Real> displacements;          // displacements[n] = ||x_n - x_{n+1}||
  std::vector<ErrorBudget<Real>> budgets;

  double k = 0.5;
  double d = 0.0;
  PowerTypeConstants consts;
  LpSpace space{1, 2.0};
  TraceMode mode = TraceMode::Full;

  std::size_t steps() const { return displacements.size(); }

  /// S_{n,n+1} = ||x_n - x_{n+1}|| - d.
  Real gap(std::size_t n) const { return displacements.at(n) - Real(d); }

  const BasicVector<Real>& iterate(std::size_t n) const {
    if (mode != TraceMode::Full) throw InputError("trace was recorded without iterates");
    return iterates.at(n);
  }

  /// P_{n,m} = ||x_n - x_m||.
  Real distance_between(std::size_t n, std::size_t m) const {
    return space.distance(iterate(n), iterate(m));
  }
};

template <Scalar Real>
bool gap_is_unresolved(const Real& displacement, double d) {
  using std::abs;
  const Real gap = abs(displacement - Real(d));
  return gap != Real(0) && gap <= Real(16) * machine_epsilon<Real>() * displacement;
}

namespace detail {

template <Scalar Real>
ErrorBudget<Real> budget_from(const BoundEvaluator<Real>& bounds, const Real& apriori_prefactor,
                              const IterationTrace<Real>& trace, std::size_t n) {
  ErrorBudget<Real> b;
  b.step = 2 * n;
  b.apriori = bounds.apriori_from_prefactor(apriori_prefactor, n);
  const Real& last = trace.displacements[2 * n - 1];
  b.aposteriori = bounds.aposteriori(last);
  b.gap_unresolved = gap_is_unresolved(last, trace.d);
  return b;
}

}  // namespace detail

/// Budget at step 2n from a recorded trace.
template <Scalar Real>
ErrorBudget<Real> error_budget_at(const IterationTrace<Real>& trace, std::size_t n) {
  if (n < 1) throw InputError("error_budget_at: n must be >= 1");
  if (trace.steps() < 2 * n) {
    throw InputError("error_budget_at: trace has " + std::to_string(trace.steps()) +
                     " steps, step " + std::to_string(2 * n) + " requested");
  }
  const BoundEvaluator<Real> bounds(trace.d, trace.k, trace.consts);
  return detail::budget_from(bounds, bounds.prefactor(trace.displacements[0]), trace, n);
}

namespace detail {

/// Incrementally extends a trace one application of T at a time.
template <Scalar Real>
class PicardStepper {
 public:
  PicardStepper(const CyclicMap<Real>& m, const BasicVector<Real>& x0, TraceMode mode)
      : map_(m), bounds_(m.d, m.k, m.space.constants()) {
    m.validate();
    if (x0.size() != m.space.dim()) throw InputError("x0 does not belong to the map's space");
    if (!m.in_a(x0)) throw InputError("x0 must lie in A");
    trace_.x0 = x0;
    trace_.last = x0;
    trace_.k = m.k;
    trace_.d = m.d;
    trace_.consts = m.space.constants();
    trace_.space = m.space;
    trace_.mode = mode;
    if (mode == TraceMode::Full) trace_.iterates.push_back(x0);
  }

  /// Applies T once; returns the new step index.
  std::size_t step() {
    BasicVector<Real> next = apply_map(map_, trace_.last);
    trace_.displacements.push_back(map_.space.distance(trace_.last, next));
    trace_.last = std::move(next);
    if (trace_.mode == TraceMode::Full) trace_.iterates.push_back(trace_.last);
    const std::size_t s = trace_.steps();
    if (s == 1) apriori_prefactor_ = bounds_.prefactor(trace_.displacements[0]);
    if (s % 2 == 0) trace_.budgets.push_back(budget_from(bounds_, apriori_prefactor_, trace_, s / 2));
    return s;
  }

  const IterationTrace<Real>& trace() const { return trace_; }
  IterationTrace<Real>&& take() { return std::move(trace_); }

 private:
  const CyclicMap<Real>& map_;
  BoundEvaluator<Real> bounds_;
  Real apriori_prefactor_{0};
  IterationTrace<Real> trace_;
};

}  // namespace detail

/// Runs `steps` Picard iterations from x0 in A.
template <Scalar Real>
IterationTrace<Real> picard_iterate(const CyclicMap<Real>& m, const BasicVector<Real>& x0,
                                    std::size_t steps, TraceMode mode = TraceMode::Full) {
  if (steps < 1) throw InputError("picard_iterate: steps must be >= 1");
  detail::PicardStepper<Real> stepper(m, x0, mode);
  for (std::size_t s = 0; s < steps; ++s) stepper.step();
  return stepper.take();
}

// ---------------------------------------------------------------------------
// Stopping
// ---------------------------------------------------------------------------

enum class StopKind { APriori, APosteriori, MaxSteps };

struct StopRule {
  StopKind kind = StopKind::APosteriori;
  double epsilon = 1e-6;
  std::size_t max_steps = 100000;

  void validate() const {
    if (!(epsilon > 0.0)) throw InputError("stop rule: epsilon must be > 0");
    if (max_steps < 2 || max_steps % 2 != 0) {
      throw InputError("stop rule: max_steps must be even and >= 2");
    }
  }
};

template <Scalar Real>
struct StopResult {
  BasicVector<Real> approx;
  std::size_t stopped_at = 0;
  IterationTrace<Real> trace;
  ErrorBudget<Real> final_budget;
};

/// The step cap was reached before the stopping criterion held.
template <Scalar Real>
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(const std::string& what, IterationTrace<Real> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const IterationTrace<Real>& partial_trace() const { return partial_; }

 private:
  IterationTrace<Real> partial_;
};

/// Iterates from x0 until the rule is met:
///  - APosteriori: first even 2n whose a posteriori bound is < eps;
///  - APriori: exactly apriori_steps_needed(||x0 - T x0||, ...) steps;
///  - MaxSteps: exactly max_steps steps.
/// Throws BudgetExhausted (carrying the partial trace) if max_steps is hit first.
template <Scalar Real>
StopResult<Real> run_with_stop(const CyclicMap<Real>& m, const BasicVector<Real>& x0,
                               const StopRule& rule, TraceMode mode = TraceMode::Full) {
  rule.validate();
  detail::PicardStepper<Real> stepper(m, x0, mode);
  const Real eps(rule.epsilon);

  auto finish = [&](std::size_t at) {
    StopResult<Real> out;
    out.final_budget = stepper.trace().budgets.back();
    out.stopped_at = at;
    out.trace = stepper.take();
    out.approx = out.trace.last;
    return out;
  };
  auto exhausted = [&](const std::string& why) {
    throw BudgetExhausted<Real>(why, stepper.take());
  };

  switch (rule.kind) {
    case StopKind::APosteriori: {
      while (stepper.trace().steps() < rule.max_steps) {
        const std::size_t s = stepper.step();
        if (s % 2 != 0) continue;
        const ErrorBudget<Real>& budget = stepper.trace().budgets.back();
        if (budget.aposteriori < eps) return finish(s);
        if (budget.gap_unresolved) {
          std::ostringstream why;
          why << "a posteriori bound stalled at " << to_double(budget.aposteriori) << " at step "
              << s << ": the displacement gap is below the arithmetic's resolution";
          exhausted(why.str());
        }
      }
      exhausted("a posteriori criterion not met within " + std::to_string(rule.max_steps) +
                " steps");
      break;
    }
    case StopKind::APriori: {
      stepper.step();
      const std::size_t needed = apriori_steps_needed(
          stepper.trace().displacements[0], m.d, m.k, m.space.constants(), rule.epsilon);
      const std::size_t target = std::min(needed, rule.max_steps);
      while (stepper.trace().steps() < target) stepper.step();
      if (needed > rule.max_steps) {
        exhausted("a priori estimate needs " + std::to_string(needed) + " steps, cap is " +
                  std::to_string(rule.max_steps));
      }
      return finish(target);
    }
    case StopKind::MaxSteps: {
      while (stepper.trace().steps() < rule.max_steps) stepper.step();
      return finish(rule.max_steps);
    }
  }
  throw std::logic_error("unreachable stop kind");
}

// ---------------------------------------------------------------------------
// Intermediate inequalities of the bound derivation
// ---------------------------------------------------------------------------

struct ChainCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// ||T^{2n}x - T^{2n+2}x|| <= P ((P - d)/(C d))^(1/q) k^(l/q), P = ||T^{2n-l}x - T^{2n+1-l}x||,
/// for 1 <= l <= 2n. Needs a full trace of at least 2n + 2 steps.
template <Scalar Real>
ChainCheck check_displacement_chain(const IterationTrace<Real>& trace, std::size_t n,
                                    std::size_t l, double rel_tol = 1e-9,
                                    double abs_tol = 0.0) {
  using std::pow;
  if (n < 1 || l < 1 || l > 2 * n) throw InputError("chain check needs 1 <= l <= 2n");
  const Real lhs = trace.distance_between(2 * n, 2 * n + 2);
  const Real& p = trace.displacements.at(2 * n - l);
  const Real excess = detail::displacement_excess(p, trace.d);
  const Real q(trace.consts.q);
  const Real rhs = p * pow(excess / (Real(trace.consts.c) * Real(trace.d)), Real(1) / q) *
                   pow(Real(trace.k), Real(static_cast<double>(l)) / q);
  ChainCheck out{to_double(lhs), to_double(rhs), false};
  out.holds = lhs <= rhs * (Real(1) + Real(rel_tol)) + Real(abs_tol);
  return out;
}

/// delta(||T^{2n}x - T^{2n+2}x|| / R) <= k^l S / R with S = ||T^{2n-l}x - T^{2n+1-l}x|| - d
/// and R = d + k^l S. The modulus is evaluated in double; its bisection
/// tolerance is allowed as absolute slack.
template <Scalar Real>
ChainCheck check_modulus_chain(const IterationTrace<Real>& trace, std::size_t n,
                               std::size_t l, double rel_tol = 1e-9) {
  using std::pow;
  if (n < 1 || l < 1 || l > 2 * n) throw InputError("chain check needs 1 <= l <= 2n");
  const Real separation = trace.distance_between(2 * n, 2 * n + 2);
  const Real excess = detail::displacement_excess(trace.displacements.at(2 * n - l), trace.d);
  const Real shrunk = pow(Real(trace.k), Real(static_cast<double>(l))) * excess;
  const Real radius = Real(trace.d) + shrunk;
  const double ratio = std::clamp(to_double(separation / radius), 0.0, 2.0);
  ChainCheck out;
  out.lhs = ratio > 0.0 ? modulus_of_convexity(trace.space.p(), ratio) : 0.0;
  out.rhs = to_double(shrunk / radius);
  out.holds = out.lhs <= out.rhs * (1.0 + rel_tol) + kModulusBisectionTolerance;
  return out;
}

}  // namespace proxima
