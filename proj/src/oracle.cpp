#include "proxima/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <utility>

#include "proxima/paper_tables_data.hpp"
#include "proxima/table_io.hpp"

namespace proxima {

std::string to_string(TableKind kind) {
  return kind == TableKind::APriori ? "apriori" : "aposteriori";
}

bool TableResult::has_paper_data() const {
  for (const auto& row : paper_counts) {
    for (const auto& cell : row) {
      if (cell) return true;
    }
  }
  return false;
}

long TableResult::max_abs_delta() const {
  long worst = 0;
  for (const auto& row : deltas) {
    for (const auto& cell : row) {
      if (cell) worst = std::max(worst, std::labs(*cell));
    }
  }
  return worst;
}

const TableGrid& paper_table(TableKind kind) {
  static const TableGrid table1 = parse_table_csv(detail::kPaperTable1Csv);
  static const TableGrid table2 = parse_table_csv(detail::kPaperTable2Csv);
  return kind == TableKind::APosteriori ? table1 : table2;
}

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

std::optional<std::size_t> index_of(const std::vector<double>& values, double v) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (close(values[i], v)) return i;
  }
  return std::nullopt;
}

template <Scalar Real>
long table_cell(TableKind kind, double lambda, const Vector& x0, double eps, double p,
                std::size_t max_steps) {
  const CyclicMap<Real> m = make_example1<Real>({lambda, p});
  const BasicVector<Real> start(x0);
  if (kind == TableKind::APriori) {
    const Real displacement = m.space.distance(start, apply_map(m, start));
    return static_cast<long>(
        apriori_steps_needed(displacement, m.d, m.k, m.space.constants(), eps));
  }
  StopRule rule{StopKind::APosteriori, eps, max_steps};
  return static_cast<long>(run_with_stop(m, start, rule, TraceMode::DisplacementsOnly).stopped_at);
}

}  // namespace

TableResult reproduce_table(TableKind kind, double lambda, const Vector& x0,
                            const std::vector<double>& eps_list,
                            const std::vector<double>& p_list, Precision precision,
                            std::size_t max_steps) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InputError("lambda must lie in (0, 1)");
  if (eps_list.empty() || p_list.empty()) throw InputError("table grid must be non-empty");
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw InputError("every eps must be > 0");
  }
  for (double p : p_list) {
    if (!(p > 1.0)) throw InputError("every p must be > 1");
  }

  TableResult result;
  result.kind = kind;
  result.lambda = lambda;
  result.x0 = x0;
  result.counts.eps = eps_list;
  result.counts.ps = p_list;

  std::vector<std::vector<std::future<long>>> pending(eps_list.size());
  for (std::size_t r = 0; r < eps_list.size(); ++r) {
    for (std::size_t c = 0; c < p_list.size(); ++c) {
      const double eps = eps_list[r];
      const double p = p_list[c];
      pending[r].push_back(std::async(std::launch::async, [=] {
        return precision == Precision::Extended
                   ? table_cell<HighPrecision>(kind, lambda, x0, eps, p, max_steps)
                   : table_cell<double>(kind, lambda, x0, eps, p, max_steps);
      }));
    }
  }
  for (auto& row : pending) {
    std::vector<long> counts;
    for (auto& cell : row) counts.push_back(cell.get());
    result.counts.cells.push_back(std::move(counts));
  }

  const bool paper_config = lambda == 0.5 && x0 == Vector{1000.0, 8.0};
  const TableGrid& paper = paper_table(kind);
  result.paper_counts.assign(eps_list.size(),
                             std::vector<std::optional<long>>(p_list.size()));
  result.deltas = result.paper_counts;
  if (paper_config) {
    for (std::size_t r = 0; r < eps_list.size(); ++r) {
      const auto pr = index_of(paper.eps, eps_list[r]);
      for (std::size_t c = 0; c < p_list.size(); ++c) {
        const auto pc = index_of(paper.ps, p_list[c]);
        if (!pr || !pc) continue;
        const long published = paper.cells[*pr][*pc];
        result.paper_counts[r][c] = published;
        result.deltas[r][c] = result.counts.cells[r][c] - published;
      }
    }
  }
  return result;
}

namespace {

struct PairState {
  Vector u;
  Vector v;
  double dist = 0.0;
};

/// Opportunistic compass search over (u, v) along coordinate and pairwise
/// diagonal directions; infeasible moves are rejected.
PairState refine_pair(const CyclicMap<double>& m, PairState s) {
  const std::size_t dim = m.space.dim();
  const std::size_t total = 2 * dim;
  std::vector<std::vector<double>> directions;
  for (std::size_t i = 0; i < total; ++i) {
    for (double si : {1.0, -1.0}) {
      std::vector<double> dir(total, 0.0);
      dir[i] = si;
      directions.push_back(dir);
      for (std::size_t j = i + 1; j < total; ++j) {
        for (double sj : {1.0, -1.0}) {
          std::vector<double> diag = dir;
          diag[j] = sj;
          directions.push_back(std::move(diag));
        }
      }
    }
  }

  double step = std::max(1.0, 0.25 * s.dist);
  constexpr double kMinStep = 1e-13;
  constexpr int kMaxMoves = 2000000;
  int moves = 0;
  while (step > kMinStep && moves < kMaxMoves) {
    bool improved = false;
    for (const auto& dir : directions) {
      Vector u = s.u;
      Vector v = s.v;
      for (std::size_t i = 0; i < dim; ++i) {
        u[i] += step * dir[i];
        v[i] += step * dir[dim + i];
      }
      if (!m.in_a(u) || !m.in_b(v)) continue;
      const double dist = m.space.distance(u, v);
      if (dist < s.dist) {
        s = {std::move(u), std::move(v), dist};
        improved = true;
        ++moves;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return s;
}

}  // namespace

double rederive_distance(const CyclicMap<double>& m, std::size_t sample_count,
                         std::uint64_t seed) {
  m.validate();
  if (sample_count < 1) throw InputError("rederive_distance: sample_count must be >= 1");
  SetSampler sampler(seed);
  std::vector<Vector> from_a;
  std::vector<Vector> from_b;
  for (std::size_t i = 0; i < sample_count; ++i) {
    from_a.push_back(sampler.draw<double>(m.box_a, m.in_a));
    from_b.push_back(sampler.draw<double>(m.box_b, m.in_b));
  }

  constexpr std::size_t kKeep = 4;
  std::vector<PairState> best;
  for (const auto& u : from_a) {
    for (const auto& v : from_b) {
      const double dist = m.space.distance(u, v);
      if (best.size() < kKeep || dist < best.back().dist) {
        best.push_back({u, v, dist});
        std::sort(best.begin(), best.end(),
                  [](const PairState& a, const PairState& b) { return a.dist < b.dist; });
        if (best.size() > kKeep) best.pop_back();
      }
    }
  }

  double estimate = std::numeric_limits<double>::infinity();
  for (auto& candidate : best) estimate = std::min(estimate, refine_pair(m, candidate).dist);

  if (estimate < m.d - 1e-6) {
    throw DeclarationError("declared dist(A, B) = " + format_exact(m.d) +
                           " exceeds the measured " + format_exact(estimate));
  }
  return estimate;
}

}  // namespace proxima
