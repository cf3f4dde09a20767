// Copyright 2026 The dbgas Authors. - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef DBGAS_CSV_HPP
#define DBGAS_CSV_HPP

// RFC-4180-style CSV: a mandatory header row, comma separators, quoted fields
// when needed, '.' decimal separator and 17 significant digits for reals.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "dbgas/errors.hpp"

namespace dbgas {

using CsvCell = std::variant<double, std::int64_t, std::uint64_t, std::string>;
using CsvRow = std::vector<CsvCell>;

/// Shortest-safe round-trip rendering: "%.17g" in the C locale.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Exact inverse of format_real(); also accepts inf and nan.
inline double parse_real(const std::string& s) {
  double x = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ValidationError("csv: not a real number: '" + s + "'");
  }
  return x;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string render_cell(const CsvCell& c) {
  struct Visitor {
    std::string operator()(double x) const { return format_real(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(const std::string& s) const { return csv_escape(s); }
  };
  return std::visit(Visitor{}, c);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

/// Writes header and rows; every row must have one cell per column.
inline void write_csv(std::ostream& out, const CsvTable& table) {
  if (table.header.empty()) throw ValidationError("csv: empty header");
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    out << (j ? "," : "") << csv_escape(table.header[j]);
  }
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size()) {
      throw ValidationError("csv: row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                            " cells, header has " + std::to_string(table.header.size()));
    }
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << render_cell(row[j]);
    out << '\n';
  }
  if (!out) throw IoError("csv: write failed");
}

inline void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("csv: cannot open '" + path + "' for writing");
  write_csv(out, table);
  out.flush();
  if (!out) throw IoError("csv: write to '" + path + "' failed");
}

struct CsvText {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Parses quoted and unquoted fields; accepts LF and CRLF line ends.
inline CsvText read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      rec.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      continue;
    } else if (c == '\n') {
      rec.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(rec));
      rec.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw ValidationError("csv: unterminated quoted field");
  if (any) {
    rec.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw ValidationError("csv: missing header row");
  CsvText out;
  out.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != out.header.size()) {
      throw ValidationError("csv: line " + std::to_string(r + 1) + " has " + std::to_string(records[r].size()) +
                            " fields, header has " + std::to_string(out.header.size()));
    }
    out.rows.push_back(std::move(records[r]));
  }
  return out;
}

inline CsvText read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("csv: cannot open '" + path + "'");
  return read_csv(in);
}

}  // namespace dbgas

#endif  // DBGAS_CSV_HPP
