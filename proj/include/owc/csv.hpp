#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace owc {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;  ///< file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  double number(std::size_t row, const std::string& col) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (columns[c] == col) {
        const Cell& v = rows.at(row).at(c);
        if (auto d = std::get_if<double>(&v)) return *d;
        if (auto i = std::get_if<long long>(&v)) return static_cast<double>(*i);
        throw std::invalid_argument("column '" + col + "' is not numeric");
      }
    throw std::invalid_argument("no column '" + col + "' in table " + name);
  }
  const std::string& text(std::size_t row, const std::string& col) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
      if (columns[c] == col) return std::get<std::string>(rows.at(row).at(c));
    throw std::invalid_argument("no column '" + col + "' in table " + name);
  }
};

/// Six significant digits; non-finite values as nan/inf/-inf.
inline std::string format_cell(const Cell& c) {
  if (auto s = std::get_if<std::string>(&c)) return *s;
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  const double v = std::get<double>(c);
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline void write_csv(std::ostream& out, const Table& t, const std::vector<std::string>& header) {
  for (const auto& h : header) out << "# " << h << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
    out << '\n';
  }
}

inline std::filesystem::path write_csv(const std::filesystem::path& dir, const Table& t,
                                       const std::vector<std::string>& header) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (t.name + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(out, t, header);
  return path;
}

}  // namespace owc
