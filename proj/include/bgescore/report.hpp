#ifndef BGESCORE_REPORT_HPP
#define BGESCORE_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

#include "bgescore/errors.hpp"

namespace bge {

// Scores are printed with 12 significant digits everywhere.
std::string format_score(double value);

// Named table of string cells.  Cells may contain single spaces but not
// runs of two or more (the serialization aligns columns with spaces).
struct ReportTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  bool operator==(const ReportTable&) const = default;
};

// Ordered key:value entries plus tables; the output format of every CLI
// command.  serialize/parse round-trip exactly.
class RunReport {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);  // formatted via format_score
  void set(const std::string& key, long long value);
  const std::string* find(const std::string& key) const;

  void add_table(ReportTable table);

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  const std::vector<ReportTable>& tables() const { return tables_; }

  std::string serialize() const;
  static RunReport parse(const std::string& text);

  bool operator==(const RunReport&) const = default;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<ReportTable> tables_;
};

}  // namespace bge

#endif
