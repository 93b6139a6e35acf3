#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "subcity/errors.hpp"

namespace subcity {

// Shortest decimal representation that round-trips the exact double value.
// All emitted tables use this so outputs are locale-independent and
// byte-reproducible.
inline std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace csv {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

// Plain comma-separated table: header row + data rows, UTF-8, no quoting.
// CRLF line endings and a UTF-8 BOM are tolerated on input.
struct Table {
  std::string path;
  std::vector<std::string> header;          // as written in the file
  std::vector<std::string> header_lower;    // lowercased, for schema matching
  std::vector<std::vector<std::string>> rows;

  // 1-based line number in the file for data row r.
  std::size_t line_of(std::size_t r) const { return r + 2; }

  std::optional<std::size_t> column(std::initializer_list<std::string_view> aliases) const {
    for (auto alias : aliases) {
      auto it = std::find(header_lower.begin(), header_lower.end(), std::string(alias));
      if (it != header_lower.end())
        return static_cast<std::size_t>(it - header_lower.begin());
    }
    return std::nullopt;
  }
};

inline Table read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open '" + path + "'");
  Table table;
  table.path = path;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
          static_cast<unsigned char>(line[1]) == 0xBB &&
          static_cast<unsigned char>(line[2]) == 0xBF)
        line.erase(0, 3);
      table.header = split_line(line);
      for (const auto& h : table.header) table.header_lower.push_back(lower(h));
      first = false;
      continue;
    }
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != table.header.size())
      throw input_error(path + ": line " + std::to_string(table.rows.size() + 2) +
                        " has " + std::to_string(cells.size()) + " fields, expected " +
                        std::to_string(table.header.size()));
    table.rows.push_back(std::move(cells));
  }
  if (first) throw input_error(path + ": empty file (missing header row)");
  return table;
}

inline std::int64_t parse_int(const std::string& cell, const std::string& path,
                              std::size_t line, std::string_view what) {
  std::int64_t value = 0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw input_error(path + ": line " + std::to_string(line) + ": '" + cell +
                      "' is not a valid integer for " + std::string(what));
  return value;
}

inline double parse_double(const std::string& cell, const std::string& path,
                           std::size_t line, std::string_view what) {
  double value = 0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw input_error(path + ": line " + std::to_string(line) + ": '" + cell +
                      "' is not a valid number for " + std::string(what));
  return value;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // LF newlines on every platform
  if (!out) throw input_error("cannot write '" + path + "'");
  return out;
}

}  // namespace csv
}  // namespace subcity
