#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace molgate {

// Round-trip decimal form with 17 significant digits.
std::string format_double(double x);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// Short stable digest of an ordered key/value echo, used in file names.
std::string config_digest(const std::vector<std::pair<std::string, std::string>>& echo);

// CSV with a `#`-prefixed header block, one column row, then data rows.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_header(const std::string& key, const std::string& value);
  void add_row(std::vector<std::string> values);
  void add_row(const std::vector<double>& values);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> header_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

// Gnuplot script plotting `y_column` against `x_column` of a CSV written by
// CsvTable, one curve per distinct value of `group_column` when given.
std::string gnuplot_script(const std::filesystem::path& csv, const std::string& title,
                           const std::vector<std::string>& columns,
                           const std::string& x_column, const std::string& y_column,
                           const std::string& group_column = {});

// Machine-readable record of a CLI run: configuration, summary values, and
// every output file with its SHA-256.
class RunManifest {
 public:
  RunManifest(std::string command, nlohmann::json config);

  void add_file(const std::filesystem::path& path);
  void set(const std::string& key, nlohmann::json value);
  const nlohmann::json& json() const { return doc_; }
  void write(const std::filesystem::path& path) const;

 private:
  nlohmann::json doc_;
};

}  // namespace molgate
