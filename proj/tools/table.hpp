#pragma once

#include <string>
#include <vector>

namespace mcf::cli {

// Column-major numeric table with a header row.
struct Table {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;

  void add(std::string name, std::vector<double> values);
  const std::vector<double>& col(const std::string& name) const;
  std::size_t rows() const { return cols.empty() ? 0 : cols.front().size(); }
};

/// Throws Error(Io) on unreadable, empty or non-numeric input.
Table read_csv(const std::string& path);
void write_csv(const std::string& path, const Table& t);

/// Shortest round-trip decimal form, so CSV/JSON output is byte-stable.
std::string format_number(double v);

void write_text(const std::string& path, const std::string& text);

}  // namespace mcf::cli
