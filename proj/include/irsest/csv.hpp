// Copyright 2026 The irsest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IRSEST_CSV_HPP
#define IRSEST_CSV_HPP

// Sweep output format. Numbers use the shortest decimal that round-trips,
// lines end in LF, and the header is always written.

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "irsest/error.hpp"
#include "irsest/mc.hpp"

namespace irsest {

inline constexpr std::string_view kCsvHeader =
    "axis_name,axis_value,mse_empirical,mse_stderr,lower_bound,upper_bound,"
    "mse_asymptotic,trials,seed";

struct CsvRow {
  std::string axis_name;
  double axis_value = 0.0;
  double mse_empirical = 0.0;
  double mse_stderr = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double mse_asymptotic = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

inline CsvRow to_csv_row(std::string_view axis_name, const MseRecord& r) {
  return {std::string(axis_name), r.axis_value,  r.mse_empirical,
          r.mse_stderr,           r.lower_bound, r.upper_bound,
          r.mse_asymptotic,       r.trials,      r.seed};
}

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

inline void write_csv_row(std::ostream& out, const CsvRow& row) {
  out << row.axis_name << ',' << format_double(row.axis_value) << ','
      << format_double(row.mse_empirical) << ','
      << format_double(row.mse_stderr) << ','
      << format_double(row.lower_bound) << ','
      << format_double(row.upper_bound) << ','
      << format_double(row.mse_asymptotic) << ',' << row.trials << ','
      << row.seed << '\n';
}

namespace detail {

template <class T>
T parse_field(std::string_view field, std::size_t line) {
  T value{};
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last)
    throw ConfigError("csv line " + std::to_string(line) + ": bad number '" +
                      std::string(field) + "'");
  return value;
}

}  // namespace detail

inline std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw ConfigError("csv: missing or unexpected header");
  std::vector<CsvRow> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 9)
      throw ConfigError("csv line " + std::to_string(number) +
                        ": expected 9 fields");
    CsvRow r;
    r.axis_name = std::string(f[0]);
    r.axis_value = detail::parse_field<double>(f[1], number);
    r.mse_empirical = detail::parse_field<double>(f[2], number);
    r.mse_stderr = detail::parse_field<double>(f[3], number);
    r.lower_bound = detail::parse_field<double>(f[4], number);
    r.upper_bound = detail::parse_field<double>(f[5], number);
    r.mse_asymptotic = detail::parse_field<double>(f[6], number);
    r.trials = detail::parse_field<std::uint64_t>(f[7], number);
    r.seed = detail::parse_field<std::uint64_t>(f[8], number);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace irsest

#endif  // IRSEST_CSV_HPP
