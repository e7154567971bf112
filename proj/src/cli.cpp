#include "proxima/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "proxima/cyclic.hpp"

namespace proxima::cli {

namespace {

std::string format_point(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_human(v[i]);
  }
  return s + ")";
}

std::string kind_name(StopKind kind) {
  switch (kind) {
    case StopKind::APriori: return "apriori";
    case StopKind::APosteriori: return "aposteriori";
    case StopKind::MaxSteps: return "maxsteps";
  }
  return "?";
}

template <Scalar Real>
CyclicMap<Real> build_map(const RunConfig& config) {
  if (config.map != "example1") throw InputError("unknown map '" + config.map + "'");
  CyclicMap<Real> m = make_example1<Real>({config.lambda, config.p});
  if (config.declared_k) m.k = *config.declared_k;
  m.validate();
  return m;
}

using Summary = std::vector<std::pair<std::string, std::string>>;

void write_summary(std::ostream& out, const Summary& rows, OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv:
      out << "key,value\n";
      for (const auto& [key, value] : rows) out << key << ",\"" << value << "\"\n";
      break;
    case OutputFormat::Markdown:
      out << "| key | value |\n|---|---|\n";
      for (const auto& [key, value] : rows) out << "| " << key << " | " << value << " |\n";
      break;
    case OutputFormat::Plain:
      for (const auto& [key, value] : rows) {
        out << key << std::string(key.size() < 13 ? 13 - key.size() : 1, ' ') << value << '\n';
      }
      break;
  }
}

template <Scalar Real>
int solve_with(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const CyclicMap<Real> m = build_map<Real>(config);
  const BasicVector<Real> x0(Vector(config.x0));
  if (x0.size() != m.space.dim()) {
    throw InputError("--x0 must have " + std::to_string(m.space.dim()) + " coordinates");
  }
  if (!m.in_a(x0)) throw InputError("--x0 must lie in A");

  Summary rows;
  rows.emplace_back("map", m.name + " (lambda=" + format_human(config.lambda) +
                               ", p=" + format_human(config.p) + ", k=" + format_human(m.k) +
                               ", d=" + format_human(m.d) + ")");
  rows.emplace_back("criterion", kind_name(config.rule.kind) + ", eps=" +
                                     format_human(config.rule.epsilon) +
                                     ", max_steps=" + std::to_string(config.rule.max_steps));

  StopResult<Real> result;
  try {
    result = run_with_stop(m, x0, config.rule);
  } catch (const BudgetExhausted<Real>& e) {
    rows.emplace_back("steps_run", std::to_string(e.partial_trace().steps()));
    write_summary(out, rows, config.format);
    err << "not converged: " << e.what() << "\n";
    return kExitFailure;
  }

  rows.emplace_back("stopped_at", std::to_string(result.stopped_at));
  rows.emplace_back("approx", format_point(Vector(result.approx)));
  rows.emplace_back("apriori", format_human(to_double(result.final_budget.apriori)));
  rows.emplace_back("aposteriori", format_human(to_double(result.final_budget.aposteriori)));
  if (result.final_budget.gap_unresolved) {
    rows.emplace_back("note", "displacement gap is at the arithmetic's resolution floor");
  }
  if (config.oracle) {
    const ReferenceSolution ref = reference_best_proximity(m, x0);
    const double true_error =
        to_double(m.space.distance(result.approx, BasicVector<Real>(ref.xi)));
    rows.emplace_back("reference", format_point(ref.xi) + (ref.method == ReferenceMethod::Exact
                                                               ? " (exact)"
                                                               : " (iterated)"));
    rows.emplace_back("true_error", format_human(true_error));
  }
  if (!config.out_path.empty()) {
    std::ofstream file(config.out_path);
    if (!file) throw InputError("cannot open '" + config.out_path + "' for writing");
    write_trace_csv(file, result.trace, m);
    rows.emplace_back("trace", config.out_path);
  }
  write_summary(out, rows, config.format);
  return kExitOk;
}

}  // namespace

long paper_tolerance(TableKind kind) { return kind == TableKind::APosteriori ? 2 : 4; }

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  config.rule.validate();
  return config.precision == Precision::Extended ? solve_with<HighPrecision>(config, out, err)
                                                 : solve_with<double>(config, out, err);
}

int cmd_table(const TableConfig& config, std::ostream& out, std::ostream& err) {
  const TableGrid& published = paper_table(config.kind);
  const std::vector<double> eps = config.eps.empty() ? published.eps : config.eps;
  const std::vector<double> ps = config.ps.empty() ? published.ps : config.ps;
  if (config.x0.size() != 2) throw InputError("--x0 must have 2 coordinates");
  const CyclicMap<double> probe = make_example1<double>({config.lambda, ps.front()});
  if (!probe.in_a(Vector(config.x0))) throw InputError("--x0 must lie in A");

  TableResult result;
  try {
    result = reproduce_table(config.kind, config.lambda, Vector(config.x0), eps, ps,
                             config.precision);
  } catch (const BudgetExhausted<double>& e) {
    err << "table cell did not converge: " << e.what() << "\n";
    return kExitFailure;
  } catch (const BudgetExhausted<HighPrecision>& e) {
    err << "table cell did not converge: " << e.what() << "\n";
    return kExitFailure;
  }

  std::ofstream file;
  if (!config.out_path.empty()) {
    file.open(config.out_path);
    if (!file) throw InputError("cannot open '" + config.out_path + "' for writing");
  }
  std::ostream& sink = config.out_path.empty() ? out : file;
  write_table_result(sink, result, config.format, config.compare_paper);

  if (config.compare_paper && result.has_paper_data()) {
    const long tolerance = paper_tolerance(config.kind);
    if (result.max_abs_delta() > tolerance) {
      err << to_string(config.kind) << " counts differ from the published grid by up to "
          << result.max_abs_delta() << " steps (tolerance " << tolerance << ")\n";
      return kExitFailure;
    }
  }
  return kExitOk;
}

int cmd_verify(Suite suite, const SuiteOptions& options, std::ostream& out, std::ostream&) {
  const std::vector<PropertyResult> results = run_suite(suite, options);
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << '[' << r.suite << "] " << r.name;
    if (!r.detail.empty()) out << " :: " << r.detail;
    out << '\n';
    if (!r.passed) ++failed;
  }
  out << results.size() - failed << '/' << results.size() << " properties passed\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_modulus(double p, double eps, std::ostream& out, std::ostream&) {
  const double delta = modulus_of_convexity(p, eps);
  const PowerTypeConstants consts = power_type_constants(p);
  out << "delta  " << format_exact(delta) << '\n';
  out << "bound  " << format_exact(consts.c * std::pow(eps, consts.q)) << '\n';
  out << "C      " << format_exact(consts.c) << '\n';
  out << "q      " << format_exact(consts.q) << '\n';
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Picard iteration with certified error bounds for best proximity points"};
  app.require_subcommand(1);

  const std::map<std::string, OutputFormat> formats{
      {"csv", OutputFormat::Csv}, {"markdown", OutputFormat::Markdown}, {"plain", OutputFormat::Plain}};
  const std::map<std::string, Precision> precisions{{"extended", Precision::Extended},
                                                    {"double", Precision::Double}};

  RunConfig run_config;
  std::string criterion = "aposteriori";
  double declared_k = 0.0;
  auto* solve = app.add_subcommand("solve", "iterate a map until a stopping rule is met");
  solve->add_option("--map", run_config.map, "built-in map")->check(CLI::IsMember({"example1"}));
  solve->add_option("--lambda", run_config.lambda, "map parameter in (0, 1)");
  solve->add_option("--p", run_config.p, "l_p exponent (> 1)");
  solve->add_option("--x0", run_config.x0, "starting point a,b")->delimiter(',');
  solve->add_option("--criterion", criterion, "stopping rule")
      ->check(CLI::IsMember({"apriori", "aposteriori", "maxsteps"}));
  solve->add_option("--eps", run_config.rule.epsilon, "target error");
  solve->add_option("--max-steps", run_config.rule.max_steps, "even step cap");
  solve->add_option("--out", run_config.out_path, "write the trace CSV here");
  solve->add_option("--format", run_config.format, "summary format")
      ->transform(CLI::CheckedTransformer(formats));
  solve->add_option("--seed", run_config.seed, "seed (unused by example1)");
  solve->add_option("--precision", run_config.precision, "scalar type")
      ->transform(CLI::CheckedTransformer(precisions));
  auto* solve_k = solve->add_option("--declared-k", declared_k, "override the declared k");
  bool no_oracle = false;
  solve->add_flag("--no-oracle", no_oracle, "skip the reference solution");

  TableConfig table_config;
  std::string table_kind = "aposteriori";
  auto* table = app.add_subcommand("table", "stopping steps over an eps x p grid");
  table->add_option("--kind,--criterion", table_kind, "which estimate drives the count")
      ->check(CLI::IsMember({"apriori", "aposteriori"}));
  table->add_option("--map", run_config.map, "built-in map")->check(CLI::IsMember({"example1"}));
  table->add_option("--lambda", table_config.lambda, "map parameter in (0, 1)");
  table->add_option("--x0", table_config.x0, "starting point a,b")->delimiter(',');
  table->add_option("--eps", table_config.eps, "comma-separated eps rows")->delimiter(',');
  table->add_option("--p", table_config.ps, "comma-separated p columns")->delimiter(',');
  table->add_option("--format", table_config.format, "output format")
      ->transform(CLI::CheckedTransformer(formats));
  table->add_flag("--compare-paper", table_config.compare_paper, "append published and delta grids");
  table->add_option("--out", table_config.out_path, "write the table here");
  table->add_option("--precision", table_config.precision, "scalar type")
      ->transform(CLI::CheckedTransformer(precisions));

  SuiteOptions suite_options;
  std::string suite_name = "all";
  auto* verify = app.add_subcommand("verify", "run property suites");
  verify->add_option("--suite", suite_name, "norms|cyclic|bounds|tables|all")
      ->check(CLI::IsMember({"norms", "cyclic", "bounds", "tables", "all"}));
  verify->add_option("--seed", suite_options.seed, "sampling seed");
  auto* verify_k = verify->add_option("--declared-k", declared_k, "override the declared k");

  double mod_p = 2.0;
  double mod_eps = 1.0;
  auto* modulus = app.add_subcommand("modulus", "modulus of convexity of l_p");
  modulus->add_option("--p", mod_p, "exponent (> 1)")->required();
  modulus->add_option("--eps", mod_eps, "argument in (0, 2]")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*solve) {
      run_config.rule.kind = criterion == "apriori"       ? StopKind::APriori
                             : criterion == "aposteriori" ? StopKind::APosteriori
                                                          : StopKind::MaxSteps;
      if (*solve_k) run_config.declared_k = declared_k;
      run_config.oracle = !no_oracle;
      return cmd_solve(run_config, out, err);
    }
    if (*table) {
      table_config.kind = table_kind == "apriori" ? TableKind::APriori : TableKind::APosteriori;
      return cmd_table(table_config, out, err);
    }
    if (*verify) {
      if (*verify_k) suite_options.declared_k = declared_k;
      return cmd_verify(parse_suite(suite_name), suite_options, out, err);
    }
    if (*modulus) return cmd_modulus(mod_p, mod_eps, out, err);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitInput;
}

}  // namespace proxima::cli
