#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "proxima/oracle.hpp"
#include "proxima/solver.hpp"
#include "proxima/suites.hpp"
#include "proxima/table_io.hpp"

namespace proxima::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verification failure or non-convergence
inline constexpr int kExitInput = 2;

struct RunConfig {
  std::string map = "example1";
  double lambda = 0.5;
  double p = 2.0;
  std::vector<double> x0{1000.0, 8.0};
  StopRule rule{StopKind::APosteriori, 1e-6, 100000};
  std::string out_path;  // empty: no trace file
  OutputFormat format = OutputFormat::Plain;
  std::uint64_t seed = 42;
  Precision precision = Precision::Extended;
  std::optional<double> declared_k;
  bool oracle = true;
};

struct TableConfig {
  TableKind kind = TableKind::APosteriori;
  double lambda = 0.5;
  std::vector<double> x0{1000.0, 8.0};
  std::vector<double> eps;  // empty: published rows
  std::vector<double> ps;   // empty: published columns
  OutputFormat format = OutputFormat::Markdown;
  bool compare_paper = false;
  std::string out_path;
  Precision precision = Precision::Extended;
};

/// Largest |computed - published| accepted by `table --compare-paper`.
long paper_tolerance(TableKind kind);

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_table(const TableConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(Suite suite, const SuiteOptions& options, std::ostream& out, std::ostream& err);
int cmd_modulus(double p, double eps, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand. Returns 0, 1 or 2.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace proxima::cli
