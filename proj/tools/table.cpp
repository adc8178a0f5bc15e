#include "table.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mcf/errors.hpp"

namespace mcf::cli {

void Table::add(std::string name, std::vector<double> values) {
  if (!cols.empty() && values.size() != rows()) fail(ErrorCode::GridMismatch, "column " + name + " has wrong length");
  names.push_back(std::move(name));
  cols.push_back(std::move(values));
}

const std::vector<double>& Table::col(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return cols[i];
  fail(ErrorCode::Io, "missing column '" + name + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::string line;
  Table t;
  if (!std::getline(in, line) || trim(line).empty()) fail(ErrorCode::Io, path + " is empty");
  t.names = split(line);
  t.cols.resize(t.names.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.names.size())
      fail(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.names.size()) + " fields");
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double v = 0;
      const auto* b = cells[j].data();
      const auto [p, ec] = std::from_chars(b, b + cells[j].size(), v);
      if (ec != std::errc() || p != b + cells[j].size() || cells[j].empty())
        fail(ErrorCode::Io, path + ":" + std::to_string(lineno) + ": '" + cells[j] + "' is not a number");
      t.cols[j].push_back(v);
    }
  }
  if (t.rows() == 0) fail(ErrorCode::Io, path + " has no data rows");
  return t;
}

std::string format_number(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_csv(const std::string& path, const Table& t) {
  std::ostringstream os;
  for (std::size_t j = 0; j < t.names.size(); ++j) os << (j ? "," : "") << t.names[j];
  os << '\n';
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols.size(); ++j) os << (j ? "," : "") << format_number(t.cols[j][i]);
    os << '\n';
  }
  write_text(path, os.str());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed for " + path);
}

}  // namespace mcf::cli
