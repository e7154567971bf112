#pragma once

#include <cstddef>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "proxima/cyclic.hpp"
#include "proxima/oracle.hpp"
#include "proxima/solver.hpp"

namespace proxima {

enum class OutputFormat { Csv, Markdown, Plain };

OutputFormat parse_output_format(std::string_view name);

/// Shortest representation that parses back to the same double.
std::string format_shortest(double value);

/// 17 significant digits (round-trip safe).
std::string format_exact(double value);

/// 6 significant digits for human-readable output.
std::string format_human(double value);

/// Table CSV: header `eps,<p_1>,...,<p_m>`, one row per eps, integer cells.
TableGrid parse_table_csv(std::string_view text);

using CellFormatter = std::function<std::string(std::size_t row, std::size_t col)>;

/// Writes an eps x p grid. CSV has an `eps` first column; Markdown mirrors the
/// published layout with an `ε \ p` corner; Plain is space aligned.
void write_grid(std::ostream& os, const std::vector<double>& eps, const std::vector<double>& ps,
                const CellFormatter& cell, OutputFormat format);

void write_table(std::ostream& os, const TableGrid& grid, OutputFormat format);

/// Computed grid, then (when published data exists) the paper grid and the delta grid.
void write_table_result(std::ostream& os, const TableResult& result, OutputFormat format,
                        bool compare_paper);

/// Trace CSV: `step,side,coord_0,...,coord_{n-1},displacement,apriori,aposteriori`.
/// `side` is A or B by membership; displacement is ||x_step - x_{step+1}|| (empty
/// on the last row); bounds are filled on even steps >= 2 only.
template <Scalar Real>
void write_trace_csv(std::ostream& os, const IterationTrace<Real>& trace,
                     const CyclicMap<Real>& m) {
  const std::size_t dim = m.space.dim();
  os << "step,side";
  for (std::size_t i = 0; i < dim; ++i) os << ",coord_" << i;
  os << ",displacement,apriori,aposteriori\n";
  for (std::size_t s = 0; s <= trace.steps(); ++s) {
    const BasicVector<Real>& x = trace.iterate(s);
    os << s << ',' << (m.in_a(x) ? "A" : (m.in_b(x) ? "B" : "?"));
    for (std::size_t i = 0; i < dim; ++i) os << ',' << format_exact(to_double(x[i]));
    os << ',';
    if (s < trace.steps()) os << format_exact(to_double(trace.displacements[s]));
    os << ',';
    if (s >= 2 && s % 2 == 0) {
      const auto& b = trace.budgets.at(s / 2 - 1);
      os << format_exact(to_double(b.apriori)) << ',' << format_exact(to_double(b.aposteriori));
    } else {
      os << ',';
    }
    os << '\n';
  }
}

}  // namespace proxima
