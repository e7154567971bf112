#include "proxima/table_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <string>
#include <system_error>

#include "proxima/errors.hpp"

namespace proxima {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("table csv: cannot parse number '" + s + "'");
  }
  return v;
}

long parse_long(const std::string& s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("table csv: cannot parse count '" + s + "'");
  }
  return v;
}

}  // namespace

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "markdown") return OutputFormat::Markdown;
  if (name == "plain") return OutputFormat::Plain;
  throw InputError("unknown format '" + std::string(name) + "'");
}

std::string format_shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_exact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_human(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

TableGrid parse_table_csv(std::string_view text) {
  TableGrid grid;
  bool header_seen = false;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    if (!header_seen) {
      if (fields.empty() || fields.front() != "eps") {
        throw InputError("table csv: header must start with 'eps'");
      }
      for (std::size_t i = 1; i < fields.size(); ++i) grid.ps.push_back(parse_double(fields[i]));
      header_seen = true;
      continue;
    }
    if (fields.size() != grid.ps.size() + 1) {
      throw InputError("table csv: row '" + line + "' has the wrong number of cells");
    }
    grid.eps.push_back(parse_double(fields[0]));
    std::vector<long> row;
    for (std::size_t i = 1; i < fields.size(); ++i) row.push_back(parse_long(fields[i]));
    grid.cells.push_back(std::move(row));
  }
  if (!header_seen) throw InputError("table csv: empty input");
  return grid;
}

void write_grid(std::ostream& os, const std::vector<double>& eps, const std::vector<double>& ps,
                const CellFormatter& cell, OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: {
      os << "eps";
      for (double p : ps) os << ',' << format_shortest(p);
      os << '\n';
      for (std::size_t r = 0; r < eps.size(); ++r) {
        os << format_shortest(eps[r]);
        for (std::size_t c = 0; c < ps.size(); ++c) os << ',' << cell(r, c);
        os << '\n';
      }
      break;
    }
    case OutputFormat::Markdown: {
      os << "| ε \\ p |";
      for (double p : ps) os << ' ' << format_shortest(p) << " |";
      os << "\n|---|";
      for (std::size_t c = 0; c < ps.size(); ++c) os << "---:|";
      os << '\n';
      for (std::size_t r = 0; r < eps.size(); ++r) {
        os << "| " << format_shortest(eps[r]) << " |";
        for (std::size_t c = 0; c < ps.size(); ++c) os << ' ' << cell(r, c) << " |";
        os << '\n';
      }
      break;
    }
    case OutputFormat::Plain: {
      constexpr int kWidth = 8;
      os << std::setw(kWidth) << "eps\\p";
      for (double p : ps) os << std::setw(kWidth) << format_shortest(p);
      os << '\n';
      for (std::size_t r = 0; r < eps.size(); ++r) {
        os << std::setw(kWidth) << format_shortest(eps[r]);
        for (std::size_t c = 0; c < ps.size(); ++c) os << std::setw(kWidth) << cell(r, c);
        os << '\n';
      }
      break;
    }
  }
}

void write_table(std::ostream& os, const TableGrid& grid, OutputFormat format) {
  write_grid(
      os, grid.eps, grid.ps,
      [&](std::size_t r, std::size_t c) { return std::to_string(grid.cells[r][c]); }, format);
}

void write_table_result(std::ostream& os, const TableResult& result, OutputFormat format,
                        bool compare_paper) {
  const auto heading = [&](const std::string& title) {
    if (format == OutputFormat::Csv) {
      os << "# " << title << '\n';
    } else if (format == OutputFormat::Markdown) {
      os << "\n**" << title << "**\n\n";
    } else {
      os << '\n' << title << '\n';
    }
  };
  const auto optional_cell = [](const std::optional<long>& v, bool signed_delta) {
    if (!v) return std::string();
    if (signed_delta && *v > 0) return "+" + std::to_string(*v);
    return std::to_string(*v);
  };

  if (!compare_paper) {
    write_table(os, result.counts, format);
    return;
  }
  heading("computed (" + to_string(result.kind) + ")");
  write_table(os, result.counts, format);
  if (!result.has_paper_data()) {
    heading("no published grid for this configuration");
    return;
  }
  const auto& eps = result.counts.eps;
  const auto& ps = result.counts.ps;
  heading("paper (" + to_string(result.kind) + ")");
  write_grid(
      os, eps, ps,
      [&](std::size_t r, std::size_t c) { return optional_cell(result.paper_counts[r][c], false); },
      format);
  heading("delta = computed - paper");
  write_grid(
      os, eps, ps,
      [&](std::size_t r, std::size_t c) { return optional_cell(result.deltas[r][c], true); },
      format);
}

}  // namespace proxima
