#include "molgate/output.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace molgate {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < length; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return sha256_hex(buffer.str());
}

std::string config_digest(const std::vector<std::pair<std::string, std::string>>& echo) {
  std::string canonical;
  for (const auto& [k, v] : echo) canonical += k + "=" + v + "\n";
  return sha256_hex(canonical).substr(0, 12);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_header(const std::string& key, const std::string& value) {
  header_.emplace_back(key, value);
}

void CsvTable::add_row(std::vector<std::string> values) {
  if (values.size() != columns_.size()) {
    throw std::invalid_argument("CsvTable: row width does not match columns");
  }
  rows_.push_back(std::move(values));
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> text;
  text.reserve(values.size());
  for (double v : values) text.push_back(format_double(v));
  add_row(std::move(text));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  for (const auto& [k, v] : header_) os << "# " << k << " = " << v << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    os << (i ? "," : "") << columns_[i];
  }
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << str();
}

std::string gnuplot_script(const std::filesystem::path& csv, const std::string& title,
                           const std::vector<std::string>& columns,
                           const std::string& x_column, const std::string& y_column,
                           const std::string& group_column) {
  auto column_number = [&](const std::string& name) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i + 1;
    }
    throw std::invalid_argument("gnuplot_script: unknown column " + name);
  };
  const auto x = column_number(x_column);
  const auto y = column_number(y_column);
  std::ostringstream os;
  os << "# gnuplot script; run: gnuplot -p " << csv.filename().replace_extension(".gp").string()
     << "\n"
     << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key autotitle columnhead\n"
     << "set title '" << title << "'\n"
     << "set xlabel '" << x_column << "'\n"
     << "set ylabel '" << y_column << "'\n"
     << "set grid\n";
  const std::string file = csv.filename().string();
  if (group_column.empty()) {
    os << "plot '" << file << "' using " << x << ":" << y << " with linespoints title '"
       << y_column << "'\n";
  } else {
    const auto g = column_number(group_column);
    os << "groups = system(\"grep -v '^#' '" << file << "' | tail -n +2 | cut -d, -f" << g
       << " | sort -u\")\n"
       << "plot for [grp in groups] '" << file << "' using (strcol(" << g
       << ") eq grp ? $" << x << " : NaN):" << y
       << " with linespoints title grp\n";
  }
  return os.str();
}

RunManifest::RunManifest(std::string command, nlohmann::json config) {
  doc_["command"] = std::move(command);
  doc_["version"] = MOLGATE_VERSION;
  doc_["config"] = std::move(config);
  doc_["files"] = nlohmann::json::array();
}

void RunManifest::add_file(const std::filesystem::path& path) {
  doc_["files"].push_back({{"path", path.string()}, {"sha256", sha256_file(path)}});
}

void RunManifest::set(const std::string& key, nlohmann::json value) {
  doc_[key] = std::move(value);
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc_.dump(2) << '\n';
}

}  // namespace molgate
