/*
   Copyright 2026 The mssim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace mssim {

inline constexpr const char* kVersion = "1.0.0";

/// Real number with 17 significant digits ('.' decimal point, C locale).
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_bool(bool v) { return v ? "1" : "0"; }

/// Tabular experiment output: `#key=value` header lines, one column header
/// line, then comma-separated rows.
class ExperimentReport {
 public:
  void set(std::string key, std::string value) {
    for (auto& kv : header_) {
      if (kv.first == key) {
        kv.second = std::move(value);
        return;
      }
    }
    header_.emplace_back(std::move(key), std::move(value));
  }
  void set_columns(std::vector<std::string> columns) {
    columns_ = std::move(columns);
  }
  void add_row(std::vector<std::string> row, bool pass) {
    rows_.push_back(std::move(row));
    pass_ = pass_ && pass;
    ++(pass ? passed_ : failed_);
  }
  /// Folds a non-row condition (e.g. a failed invariant) into the verdict.
  void require(bool ok) { pass_ = pass_ && ok; }

  bool pass() const { return pass_; }
  std::size_t passed() const { return passed_; }
  std::size_t failed() const { return failed_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::pair<std::string, std::string>>& header() const {
    return header_;
  }

  void write(std::ostream& out) const {
    for (const auto& [k, v] : header_) out << '#' << k << '=' << v << '\n';
    out << "#rows_passed=" << passed_ << '\n'
        << "#rows_failed=" << failed_ << '\n'
        << "#pass=" << format_bool(pass_) << '\n';
    write_line(out, columns_);
    for (const auto& row : rows_) write_line(out, row);
  }

  std::string str() const {
    std::ostringstream out;
    write(out);
    return out.str();
  }

 private:
  static void write_line(std::ostream& out,
                         const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      write_cell(out, cells[i]);
    }
    out << '\n';
  }

  // RFC 4180 quoting for cells such as "affine:0.4,0.2".
  static void write_cell(std::ostream& out, const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) {
      out << cell;
      return;
    }
    out << '"';
    for (char c : cell) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  }

  std::vector<std::pair<std::string, std::string>> header_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  bool pass_ = true;
  std::size_t passed_ = 0;
  std::size_t failed_ = 0;
};

}  // namespace mssim
