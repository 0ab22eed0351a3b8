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

#include <ethergy/csv.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <ethergy/errors.hpp>

namespace ethergy::csv {

namespace {

std::string location(const std::filesystem::path& path, std::size_t line_no) {
    return path.string() + ":" + std::to_string(line_no);
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

}  // namespace

std::vector<std::string> split_line(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::vector<Row> read_rows(const std::filesystem::path& path, std::string_view expected_header,
                           std::size_t min_fields, std::size_t max_fields) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip_cr(line);
        if (text.empty()) continue;
        if (!saw_header) {
            if (text != expected_header) {
                throw ValidationError(location(path, line_no) + ": expected header '" +
                                      std::string(expected_header) + "', got '" +
                                      std::string(text) + "'");
            }
            saw_header = true;
            continue;
        }
        Row row{split_line(text), line_no};
        if (row.fields.size() < min_fields) {
            throw ValidationError(location(path, line_no) + ": expected at least " +
                                  std::to_string(min_fields) + " fields, got " +
                                  std::to_string(row.fields.size()));
        }
        if (max_fields > 0 && row.fields.size() > max_fields) {
            throw ValidationError(location(path, line_no) + ": expected at most " +
                                  std::to_string(max_fields) + " fields, got " +
                                  std::to_string(row.fields.size()));
        }
        rows.push_back(std::move(row));
    }
    if (!saw_header) throw ValidationError(path.string() + ": empty file, missing header");
    return rows;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

double parse_double(std::string_view text, const std::filesystem::path& path, std::size_t line_no,
                    std::string_view what) {
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError(location(path, line_no) + ": malformed " + std::string(what) + " '" +
                              std::string(text) + "'");
    }
    return value;
}

std::int64_t parse_int(std::string_view text, const std::filesystem::path& path,
                       std::size_t line_no, std::string_view what) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError(location(path, line_no) + ": malformed " + std::string(what) + " '" +
                              std::string(text) + "'");
    }
    return value;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ethergy::csv
