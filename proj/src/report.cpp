#include "bgescore/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace bge {

std::string format_score(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

void check_key(const std::string& key) {
  if (key.empty() || key.find(':') != std::string::npos ||
      key.find('\n') != std::string::npos || key.front() == '[')
    throw DomainError("bad report key: " + key);
}

void check_cell(const std::string& cell) {
  if (cell.empty() || cell.find("  ") != std::string::npos ||
      cell.find('\n') != std::string::npos || cell.front() == ' ' || cell.back() == ' ')
    throw DomainError("bad table cell: '" + cell + "'");
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  size_t i = 0;
  while (i < line.size()) {
    size_t j = i;
    while (j < line.size() &&
           !(line[j] == ' ' && j + 1 < line.size() && line[j + 1] == ' '))
      ++j;
    cells.push_back(line.substr(i, j - i));
    i = j;
    while (i < line.size() && line[i] == ' ') ++i;
  }
  return cells;
}

}  // namespace

void RunReport::set(const std::string& key, const std::string& value) {
  check_key(key);
  if (value.find('\n') != std::string::npos)
    throw DomainError("report value must be a single line");
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = value;
      return;
    }
  entries_.emplace_back(key, value);
}

void RunReport::set(const std::string& key, double value) { set(key, format_score(value)); }

void RunReport::set(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

const std::string* RunReport::find(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return &v;
  return nullptr;
}

void RunReport::add_table(ReportTable table) {
  if (table.name.empty() || table.name.find(']') != std::string::npos ||
      table.name.find('\n') != std::string::npos)
    throw DomainError("bad table name: " + table.name);
  if (table.columns.empty()) throw DomainError("table needs at least one column");
  for (const auto& c : table.columns) check_cell(c);
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw DomainError("table row width does not match the header");
    for (const auto& cell : row) check_cell(cell);
  }
  tables_.push_back(std::move(table));
}

std::string RunReport::serialize() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << ": " << v << "\n";
  for (const auto& t : tables_) {
    out << "[table " << t.name << "]\n";
    std::vector<size_t> width(t.columns.size(), 0);
    auto widen = [&](const std::vector<std::string>& row) {
      for (size_t j = 0; j < row.size(); ++j)
        width[j] = std::max(width[j], row[j].size());
    };
    widen(t.columns);
    for (const auto& row : t.rows) widen(row);
    auto emit = [&](const std::vector<std::string>& row) {
      for (size_t j = 0; j < row.size(); ++j) {
        out << row[j];
        if (j + 1 < row.size())
          out << std::string(width[j] - row[j].size() + 2, ' ');
      }
      out << "\n";
    };
    emit(t.columns);
    for (const auto& row : t.rows) emit(row);
    out << "[/table]\n";
  }
  return out.str();
}

RunReport RunReport::parse(const std::string& text) {
  RunReport report;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  ReportTable table;
  bool in_table = false, have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (in_table) {
      if (line == "[/table]") {
        report.add_table(std::move(table));
        table = {};
        in_table = false;
        continue;
      }
      auto cells = split_cells(line);
      if (!have_header) {
        table.columns = std::move(cells);
        have_header = true;
      } else {
        table.rows.push_back(std::move(cells));
      }
      continue;
    }
    if (line.rfind("[table ", 0) == 0 && line.back() == ']') {
      table.name = line.substr(7, line.size() - 8);
      in_table = true;
      have_header = false;
      continue;
    }
    const auto pos = line.find(": ");
    if (pos == std::string::npos) {
      std::ostringstream ss;
      ss << "report line " << lineno << " is neither key:value nor a table marker";
      throw ParseError(ss.str());
    }
    report.set(line.substr(0, pos), line.substr(pos + 2));
  }
  if (in_table) throw ParseError("unterminated table in report");
  return report;
}

}  // namespace bge
