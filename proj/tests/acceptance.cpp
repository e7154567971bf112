// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "proxima/cyclic.hpp"
#include "proxima/norms.hpp"
#include "proxima/oracle.hpp"
#include "proxima/solver.hpp"
#include "proxima/suites.hpp"
#include "proxima/table_io.hpp"

using namespace proxima;

namespace {

using HP = HighPrecision;
using HPVector = BasicVector<HP>;

// Tolerances and sizes, fixed here so every run is comparable.
constexpr std::uint64_t kSeed = 20240601;
constexpr long kPosteriorGridTolerance = 2;
constexpr long kPriorGridTolerance = 4;
constexpr double kPosteriorGridSeconds = 5.0;
constexpr double kPriorGridSeconds = 1.0;
constexpr double kSoundnessSeconds = 30.0;
constexpr double kGeometrySeconds = 10.0;
constexpr std::size_t kSoundnessStarts = 100;
constexpr std::size_t kSoundnessSteps = 200;
constexpr double kSoundnessSlack = 1e-9;
constexpr std::size_t kGridPoints = 1000;
constexpr std::size_t kTriples = 10000;
constexpr double kResidualTolerance = 1e-10;
// delta_p and C eps^q coincide for p = 2; allow a few ulp of rounding there.
constexpr double kDominationSlack = 8 * 2.220446049250313e-16;
constexpr std::size_t kCyclicSamples = 1000;
constexpr std::size_t kLemmaSteps = 60;
constexpr std::size_t kLemmaStarts = 5;
constexpr double kPeriodTolerance = 1e-15;
constexpr std::size_t kChainSteps = 60;
constexpr std::size_t kChainStarts = 5;
constexpr std::size_t kReferenceStarts = 20;
constexpr double kReferenceAgreement = 1e-8;
constexpr double kReferenceResidual = 1e-10;
constexpr double kDistanceTolerance = 1e-6;
constexpr std::size_t kDistanceSamples = 1000;

const std::vector<double> kTableEps{1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
const Vector kPaperStart{1000.0, 8.0};
const Vector kXi{1.0, 0.0};

struct Outcome {
  bool passed = true;
  std::string detail;
};

int failures = 0;

void run(const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.passed) ++failures;
  std::printf("%s  %-28s %7.2fs  %s\n", out.passed ? "PASS" : "FAIL", name.c_str(), secs,
              out.detail.c_str());
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::vector<Vector> starts_in_a(std::size_t count, std::uint64_t seed) {
  const auto m = make_example1<double>({0.5, 2.0});
  SetSampler sampler(seed);
  std::vector<Vector> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.draw<double>(m.box_a, m.in_a));
  return out;
}

std::string scenario(double lambda, double p) {
  return "lambda=" + format_shortest(lambda) + " p=" + format_shortest(p);
}

void print_grid(const char* title, const TableResult& t) {
  std::printf("  %s\n", title);
  std::ostringstream os;
  write_table_result(os, t, OutputFormat::Plain, true);
  std::istringstream lines(os.str());
  for (std::string line; std::getline(lines, line);) std::printf("    %s\n", line.c_str());
}

Outcome aposteriori_grid() {
  const auto t0 = std::chrono::steady_clock::now();
  const TableResult t = reproduce_table(TableKind::APosteriori, 0.5, kPaperStart, kTableEps,
                                        suite_exponents());
  const double secs = elapsed_since(t0);
  long p2_off = 0;
  const auto p2 = std::find(t.counts.ps.begin(), t.counts.ps.end(), 2.0) - t.counts.ps.begin();
  for (const auto& row : t.deltas) p2_off += std::labs(row[p2].value_or(1));
  std::ostringstream d;
  d << "max|delta|=" << t.max_abs_delta() << " (tol " << kPosteriorGridTolerance
    << "), p=2 column off by " << p2_off << ", eps=1e-2/p=2 -> " << t.counts.cells[0][p2] << ", " << format_human(secs)
    << "s of " << kPosteriorGridSeconds << "s";
  print_grid("a posteriori grid", t);
  return {t.max_abs_delta() <= kPosteriorGridTolerance && p2_off == 0 &&
              secs < kPosteriorGridSeconds,
          d.str()};
}

Outcome apriori_grid() {
  const auto t0 = std::chrono::steady_clock::now();
  const TableResult t =
      reproduce_table(TableKind::APriori, 0.5, kPaperStart, kTableEps, suite_exponents());
  const double secs = elapsed_since(t0);
  std::size_t outside = 0, cells = 0;
  for (const auto& row : t.deltas) {
    for (const auto& cell : row) {
      ++cells;
      if (std::labs(cell.value_or(0)) > kPriorGridTolerance) ++outside;
    }
  }
  print_grid("a priori grid (literal estimate)", t);
  std::ostringstream d;
  d << "max|delta|=" << t.max_abs_delta() << " (tol " << kPriorGridTolerance << "), " << outside
    << "/" << cells << " cells outside, " << format_human(secs) << "s of " << kPriorGridSeconds
    << "s";
  return {outside == 0 && secs < kPriorGridSeconds, d.str()};
}

Outcome soundness() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Vector> starts = starts_in_a(kSoundnessStarts, kSeed);
  std::size_t audits = 0, checks = 0, violations = 0;
  std::string first;
  for (double lambda : suite_lambdas()) {
    for (double p : suite_exponents()) {
      const auto m = make_example1<double>({lambda, p});
      for (const Vector& x0 : starts) {
        const SoundnessReport r = audit_soundness(m, x0, kSoundnessSteps, kSoundnessSlack);
        ++audits;
        checks += 2 * r.rows.size();
        if (r.reference.method != ReferenceMethod::Exact || r.reference.xi != kXi) {
          ++violations;
          if (first.empty()) first = "reference differs from (1,0) at " + scenario(lambda, p);
        }
        if (!r.passed()) {
          ++violations;
          if (first.empty()) {
            std::ostringstream w;
            w << scenario(lambda, p) << " step " << r.first_violation->step << " error "
              << r.first_violation->true_error;
            first = w.str();
          }
        }
      }
    }
  }
  const double secs = elapsed_since(t0);
  std::ostringstream d;
  d << audits << " orbits, " << checks << " bound checks, " << violations << " violations";
  if (!first.empty()) d << " (first: " << first << ")";
  d << ", " << format_human(secs) << "s of " << kSoundnessSeconds << "s";
  return {violations == 0 && secs < kSoundnessSeconds, d.str()};
}

// One extended-precision run to 1e-10 per orbit; the stopping step for each
// larger eps is read off the same budgets. The first orbit of every scenario
// is also re-run through run_with_stop for each eps to confirm the readout.
Outcome stop_correctness() {
  const std::vector<Vector> starts = starts_in_a(kSoundnessStarts, kSeed);
  const HPVector xi(kXi);
  std::size_t stops = 0, misses = 0, mismatches = 0;
  double worst_ratio = 0.0;
  std::string first;
  for (double lambda : suite_lambdas()) {
    for (double p : suite_exponents()) {
      const auto m = make_example1<HP>({lambda, p});
      for (std::size_t i = 0; i < starts.size(); ++i) {
        const HPVector x0(starts[i]);
        const auto full = run_with_stop(m, x0, {StopKind::APosteriori, kTableEps.back(), 1000000});
        for (double eps : kTableEps) {
          const auto hit = std::find_if(full.trace.budgets.begin(), full.trace.budgets.end(),
                                        [&](const auto& b) { return b.aposteriori < HP(eps); });
          const std::size_t step = hit->step;
          const double err = to_double(m.space.distance(full.trace.iterate(step), xi));
          ++stops;
          worst_ratio = std::max(worst_ratio, err / eps);
          if (!(err < eps)) {
            ++misses;
            if (first.empty()) first = scenario(lambda, p) + " eps=" + format_shortest(eps);
          }
          if (i == 0) {
            const auto direct = run_with_stop(m, x0, {StopKind::APosteriori, eps, 1000000},
                                              TraceMode::DisplacementsOnly);
            if (direct.stopped_at != step || direct.approx != full.trace.iterate(step)) {
              ++mismatches;
            }
          }
        }
      }
    }
  }
  std::ostringstream d;
  d << stops << " stops, " << misses << " with error >= eps, " << mismatches
    << " readout mismatches, max error/eps=" << format_human(worst_ratio);
  if (!first.empty()) d << " (first: " << first << ")";
  return {misses == 0 && mismatches == 0, d.str()};
}

Outcome geometry() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t non_monotone = 0, below = 0, residual_bad = 0, triple_bad = 0, triples = 0;
  double worst_residual = 0.0;
  std::mt19937_64 rng(kSeed);
  for (double p : suite_exponents()) {
    const PowerTypeConstants c = power_type_constants(p);
    double previous = 0.0;
    for (std::size_t i = 1; i <= kGridPoints; ++i) {
      const double eps = 2.0 * static_cast<double>(i) / kGridPoints;
      const double delta = modulus_of_convexity(p, eps);
      if (!(delta > previous)) ++non_monotone;
      previous = delta;
      if (delta < c.c * std::pow(eps, c.q) * (1.0 - kDominationSlack)) ++below;
      if (p < 2.0) {
        const double r = std::abs(modulus_equation_residual(p, eps, delta));
        worst_residual = std::max(worst_residual, r);
        if (r > kResidualTolerance) ++residual_bad;
      }
    }
    const LpSpace space(2, p);
    for (std::size_t t = 0; t < kTriples; ++t) {
      const ConvexityTriple tr = random_admissible_triple(space, rng);
      ++triples;
      if (!check_convexity_inequality(space, tr.x, tr.y, tr.z, tr.radius, tr.separation)
               .holds()) {
        ++triple_bad;
      }
    }
  }
  const double secs = elapsed_since(t0);
  std::ostringstream d;
  d << non_monotone << " monotonicity breaks, " << below << " domination misses, "
    << triple_bad << "/" << triples << " triples violated, max residual "
    << format_human(worst_residual) << ", " << format_human(secs) << "s of "
    << kGeometrySeconds << "s";
  return {non_monotone == 0 && below == 0 && residual_bad == 0 && triple_bad == 0 &&
              secs < kGeometrySeconds,
          d.str()};
}

Outcome cyclic_suite() {
  const std::vector<Vector> starts = starts_in_a(kLemmaStarts - 1, kSeed + 1);
  std::size_t bad = 0;
  std::string first;
  auto note = [&](bool ok, const std::string& what) {
    if (ok) return;
    ++bad;
    if (first.empty()) first = what;
  };
  std::uint64_t seed = kSeed;
  for (double lambda : suite_lambdas()) {
    for (double p : suite_exponents()) {
      const auto m = make_example1<double>({lambda, p});
      const std::string tag = scenario(lambda, p);
      note(verify_cyclicity(m, kCyclicSamples, ++seed).passed(), "cyclicity " + tag);
      note(verify_contraction(m, kCyclicSamples, ++seed).passed(), "contraction " + tag);
      note(lemma21_check(m, kPaperStart, kLemmaSteps).passed(), "lemma " + tag);
      for (const Vector& x0 : starts) {
        note(lemma21_check(m, x0, kLemmaSteps).passed(), "lemma " + tag);
      }
      const Vector back = apply_map(m, apply_map(m, kXi));
      note(m.space.distance(back, kXi) <= kPeriodTolerance, "period " + tag);
    }
  }
  std::ostringstream d;
  d << bad << " failing checks over " << suite_lambdas().size() * suite_exponents().size()
    << " (lambda, p) pairs";
  if (!first.empty()) d << " (first: " << first << ")";
  return {bad == 0, d.str()};
}

Outcome proof_chain() {
  std::vector<Vector> starts = starts_in_a(kChainStarts - 1, kSeed + 2);
  starts.insert(starts.begin(), kPaperStart);
  std::size_t checks = 0, bad = 0;
  std::string first;
  for (double lambda : suite_lambdas()) {
    for (double p : suite_exponents()) {
      const auto m = make_example1<HP>({lambda, p});
      for (const Vector& x0 : starts) {
        const auto trace = picard_iterate(m, HPVector(x0), kChainSteps + 2);
        for (std::size_t n = 1; 2 * n <= kChainSteps; ++n) {
          std::vector<std::size_t> ls{1, 2, 2 * n};
          ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
          for (std::size_t l : ls) {
            const bool seven = check_displacement_chain(trace, n, l).holds;
            const bool five = check_modulus_chain(trace, n, l).holds;
            checks += 2;
            if (!seven || !five) {
              ++bad;
              if (first.empty()) {
                first = scenario(lambda, p) + " 2n=" + std::to_string(2 * n) +
                        " l=" + std::to_string(l);
              }
            }
          }
        }
      }
    }
  }
  std::ostringstream d;
  d << checks << " inequality checks, " << bad << " failing";
  if (!first.empty()) d << " (first: " << first << ")";
  return {bad == 0, d.str()};
}

Outcome uniqueness() {
  const std::vector<Vector> starts = starts_in_a(kReferenceStarts, kSeed + 3);
  double spread = 0.0, period = 0.0, gap = 0.0;
  for (double lambda : suite_lambdas()) {
    for (double p : suite_exponents()) {
      const auto m = make_example1<double>({lambda, p});
      std::vector<ReferenceSolution> refs;
      for (const Vector& x0 : starts) refs.push_back(reference_best_proximity(m, x0));
      for (const auto& r : refs) {
        spread = std::max(spread, m.space.distance(r.iterated, refs.front().iterated));
        spread = std::max(spread, m.space.distance(r.xi, refs.front().xi));
        period = std::max(period, r.period_error);
        gap = std::max(gap, std::abs(r.achieved_gap));
      }
    }
  }
  double distance_error = 0.0;
  for (double p : {1.1, 2.0, 20.0}) {
    const auto m = make_example1<double>({0.5, p});
    distance_error =
        std::max(distance_error, std::abs(rederive_distance(m, kDistanceSamples, kSeed) - 2.0));
  }
  std::ostringstream d;
  d << "reference spread " << format_human(spread) << ", max ||T^2 xi - xi|| "
    << format_human(period) << ", max | ||xi - T xi|| - 2 | " << format_human(gap)
    << ", distance error " << format_human(distance_error);
  return {spread <= kReferenceAgreement && period <= kReferenceResidual &&
              gap <= kReferenceResidual && distance_error <= kDistanceTolerance,
          d.str()};
}

}  // namespace

int main() {
  run("aposteriori-grid", aposteriori_grid);
  run("apriori-grid", apriori_grid);
  run("bound-soundness", soundness);
  run("stop-correctness", stop_correctness);
  run("geometry-suite", geometry);
  run("cyclic-map-suite", cyclic_suite);
  run("proof-chain", proof_chain);
  run("uniqueness-periodicity", uniqueness);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
