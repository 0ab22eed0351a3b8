/*
   Copyright 2026 The Ethergy Authors

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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ethergy::csv {

struct Row {
    std::vector<std::string> fields;
    std::size_t line_no{0};  // 1-based, header is line 1
};

/// Reads a comma-separated file. The header must match `expected_header`
/// exactly; every data row must have between `min_fields` and `max_fields`
/// fields (0 = unbounded). Blank lines are skipped. No quoting: fields may
/// not contain commas.
std::vector<Row> read_rows(const std::filesystem::path& path, std::string_view expected_header,
                           std::size_t min_fields, std::size_t max_fields = 0);

std::vector<std::string> split_line(std::string_view line, char sep = ',');

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Fixed-precision formatting, used where a schema pins the decimal count.
std::string format_fixed(double value, int decimals);

double parse_double(std::string_view text, const std::filesystem::path& path, std::size_t line_no,
                    std::string_view what);
std::int64_t parse_int(std::string_view text, const std::filesystem::path& path,
                       std::size_t line_no, std::string_view what);

/// Writes `content` atomically (temp file + rename) with LF line endings.
void write_file(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace ethergy::csv
