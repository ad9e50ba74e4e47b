#include "antijam/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "antijam/types.hpp"

namespace antijam {

std::string csv_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns, int schema_version)
    : columns_(std::move(columns)), schema_version_(schema_version) {}

void CsvTable::set_meta(const std::string& key, const std::string& value) {
  meta_[key] = value;
}
void CsvTable::set_meta(const std::string& key, double value) {
  meta_[key] = csv_double(value);
}
void CsvTable::set_meta(const std::string& key, long long value) {
  meta_[key] = std::to_string(value);
}
void CsvTable::set_meta(const std::map<std::string, std::string>& entries) {
  for (const auto& [k, v] : entries) meta_[k] = v;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw std::logic_error("csv row has " + std::to_string(cells.size()) +
                           " cells, expected " + std::to_string(columns_.size()));
  rows_.push_back(std::move(cells));
}

void CsvTable::write(std::ostream& out) const {
  out << "# antijam " << kVersion << '\n';
  out << "# schema_version = " << schema_version_ << '\n';
  for (const auto& [k, v] : meta_) out << "# " << k << " = " << v << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

void CsvTable::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  write(out);
}

}  // namespace antijam
