#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proxima/cyclic.hpp"
#include "proxima/errors.hpp"
#include "proxima/real.hpp"
#include "proxima/solver.hpp"
#include "proxima/vector.hpp"

namespace proxima {

// ---------------------------------------------------------------------------
// Reference best proximity points
// ---------------------------------------------------------------------------

enum class ReferenceMethod { Exact, IteratedToPrecision };

struct ReferenceSolution {
  Vector xi;         // best proximity point in A
  Vector t_xi;       // its image in B
  Vector iterated;   // limit of T^{2n} x0 as actually computed
  double achieved_gap = 0.0;  // ||xi - T xi|| - d
  double period_error = 0.0;  // ||xi - T^2 xi||
  std::size_t steps = 0;      // applications of T spent
  ReferenceMethod method = ReferenceMethod::IteratedToPrecision;
};

inline constexpr double kReferenceTolerance = 1e-13;
inline constexpr std::size_t kReferenceCap = 100000;

/// Iterates T^2 from x0 until ||x_{2n} - x_{2n+2}|| < tol (1 + ||x_{2n}||)
/// and ||x_{2n} - T x_{2n}|| - d < tol. When the map declares a closed-form
/// best proximity point and the iterate is within 1e-10 of it, that point is
/// returned with method Exact.
template <Scalar Real>
ReferenceSolution reference_best_proximity(const CyclicMap<Real>& m,
                                           const BasicVector<Real>& x0,
                                           double tol = kReferenceTolerance,
                                           std::size_t cap = kReferenceCap) {
  m.validate();
  if (!(tol > 0.0)) throw InputError("reference_best_proximity: tol must be > 0");
  if (!m.in_a(x0)) throw InputError("reference_best_proximity: x0 must lie in A");

  const Real d(m.d);
  BasicVector<Real> x = x0;
  for (std::size_t step = 0; step < cap; step += 2) {
    BasicVector<Real> tx = apply_map(m, x);
    BasicVector<Real> ttx = apply_map(m, tx);
    const Real moved = m.space.distance(x, ttx);
    const Real gap = m.space.distance(x, tx) - d;
    if (moved < Real(tol) * (Real(1) + m.space.norm(x)) && gap < Real(tol)) {
      ReferenceSolution ref;
      ref.iterated = Vector(x);
      ref.steps = step;
      ref.xi = ref.iterated;
      if (m.known_best_proximity &&
          m.space.distance(*m.known_best_proximity, ref.iterated) <= 1e-10) {
        ref.method = ReferenceMethod::Exact;
        ref.xi = *m.known_best_proximity;
      }
      const BasicVector<Real> xi(ref.xi);
      const BasicVector<Real> t_xi = apply_map(m, xi);
      ref.t_xi = Vector(t_xi);
      ref.achieved_gap = to_double(m.space.distance(xi, t_xi) - d);
      ref.period_error = to_double(m.space.distance(xi, apply_map(m, t_xi)));
      return ref;
    }
    x = std::move(ttx);
  }
  throw NumericalError("reference_best_proximity: no convergence within " +
                       std::to_string(cap) + " steps");
}

// ---------------------------------------------------------------------------
// Soundness audit
// ---------------------------------------------------------------------------

struct SoundnessRow {
  std::size_t step = 0;
  double true_error = 0.0;
  double apriori = 0.0;
  double aposteriori = 0.0;
  double apriori_ratio = 0.0;      // bound / true error (inf when the error is 0)
  double aposteriori_ratio = 0.0;
  bool holds = true;
};

struct SoundnessReport {
  std::vector<SoundnessRow> rows;
  ReferenceSolution reference;
  std::optional<SoundnessRow> first_violation;
  bool passed() const { return !first_violation.has_value(); }
};

inline constexpr double kSoundnessSlack = 1e-9;

/// Checks true error <= both bounds at every even step up to `steps`.
template <Scalar Real>
SoundnessReport audit_soundness(const CyclicMap<Real>& m, const BasicVector<Real>& x0,
                                std::size_t steps, double slack = kSoundnessSlack) {
  if (steps < 2) throw InputError("audit_soundness: steps must be >= 2");
  SoundnessReport report;
  report.reference = reference_best_proximity(m, x0);
  const BasicVector<Real> xi(report.reference.xi);
  const IterationTrace<Real> trace = picard_iterate(m, x0, steps);
  for (const auto& budget : trace.budgets) {
    SoundnessRow row;
    row.step = budget.step;
    const Real err = m.space.distance(trace.iterate(budget.step), xi);
    row.true_error = to_double(err);
    row.apriori = to_double(budget.apriori);
    row.aposteriori = to_double(budget.aposteriori);
    const double inf = std::numeric_limits<double>::infinity();
    row.apriori_ratio = row.true_error > 0.0 ? row.apriori / row.true_error : inf;
    row.aposteriori_ratio = row.true_error > 0.0 ? row.aposteriori / row.true_error : inf;
    row.holds = err <= budget.apriori + Real(slack) && err <= budget.aposteriori + Real(slack);
    if (!row.holds && !report.first_violation) report.first_violation = row;
    report.rows.push_back(row);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Table reproduction
// ---------------------------------------------------------------------------

enum class TableKind { APriori, APosteriori };
enum class Precision { Double, Extended };

std::string to_string(TableKind kind);

/// Rows are eps values, columns are p values, cells are even step counts.
struct TableGrid {
  std::vector<double> eps;
  std::vector<double> ps;
  std::vector<std::vector<long>> cells;
};

struct TableResult {
  TableKind kind = TableKind::APosteriori;
  double lambda = 0.5;
  Vector x0;
  TableGrid counts;
  /// Same shape as counts; empty optional where no published value exists.
  std::vector<std::vector<std::optional<long>>> paper_counts;
  std::vector<std::vector<std::optional<long>>> deltas;  // counts - paper_counts

  bool has_paper_data() const;
  /// Largest |delta| over cells with published data (0 if none).
  long max_abs_delta() const;
};

/// Published iteration counts for lambda = 1/2, x0 = (1000, 8).
const TableGrid& paper_table(TableKind kind);

/// Fills the (eps x p) grid of stopping steps for the planar example. For
/// APosteriori each cell runs the live a posteriori stop; for APriori each
/// cell evaluates apriori_steps_needed with D = ||x0 - T x0||_p. Cells are
/// computed concurrently and assembled in grid order.
TableResult reproduce_table(TableKind kind, double lambda, const Vector& x0,
                            const std::vector<double>& eps_list,
                            const std::vector<double>& p_list,
                            Precision precision = Precision::Extended,
                            std::size_t max_steps = 1000000);

// ---------------------------------------------------------------------------
// Distance cross-check
// ---------------------------------------------------------------------------

/// Numerical estimate of dist(A, B): best of sample_count x sample_count
/// sampled pairs, refined by a pattern search that stays inside both sets.
/// Throws DeclarationError when the estimate is below the declared d - 1e-6.
double rederive_distance(const CyclicMap<double>& m, std::size_t sample_count,
                         std::uint64_t seed);

}  // namespace proxima
