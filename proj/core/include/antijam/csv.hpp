#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace antijam {

/// Decimal formatting with 12 significant digits; every numeric CSV cell
/// goes through this so re-runs are byte-identical.
std::string csv_double(double x);

/// CSV emitter with '#'-prefixed header comments: toolkit version first, then
/// schema_version, then the metadata keys in sorted order, then the column
/// header and rows.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns, int schema_version = 1);

  void set_meta(const std::string& key, const std::string& value);
  void set_meta(const std::string& key, double value);
  void set_meta(const std::string& key, long long value);
  void set_meta(const std::map<std::string, std::string>& entries);

  void add_row(std::vector<std::string> cells);

  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  int schema_version_;
  std::map<std::string, std::string> meta_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace antijam
