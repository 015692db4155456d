/*
 * Copyright (C) 2026 ocsim contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "ocsim/csv.hpp"

#include "ocsim/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ocsim::csv
{

namespace
{

std::vector<std::string> split_line(std::string line)
{
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

Table parse_stream(std::istream& in, const std::string& expected_header, const std::string& label)
{
    Table table;
    table.path = label;

    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(label + ": empty file, expected header '" + expected_header + "'");
    }
    table.header = split_line(line);
    const std::vector<std::string> expected = split_line(expected_header);
    if (table.header != expected) {
        throw DataError(label + ": header mismatch, expected '" + expected_header + "'");
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) {
            continue;
        }
        auto fields = split_line(line);
        if (fields.size() != table.header.size()) {
            throw DataError(label + ": line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    return table;
}

[[noreturn]] void bad_number(const Table& table, std::size_t row, std::size_t col, const char* kind)
{
    throw DataError(table.path + ": row " + std::to_string(row + 2) + ", column '" + table.header[col] +
                    "': not a valid " + kind + " ('" + table.rows[row][col] + "')");
}

} // namespace

Table read_file(const std::string& path, const std::string& expected_header)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    return parse_stream(in, expected_header, path);
}

Table read_text(const std::string& text, const std::string& expected_header, const std::string& label)
{
    std::istringstream in(text);
    return parse_stream(in, expected_header, label);
}

long long to_int(const Table& table, std::size_t row, std::size_t col)
{
    const std::string& s = table.rows[row][col];
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        bad_number(table, row, col, "integer");
    }
    return value;
}

double to_double(const Table& table, std::size_t row, std::size_t col)
{
    const std::string& s = table.rows[row][col];
    if (s.empty()) {
        bad_number(table, row, col, "number");
    }
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &consumed);
    } catch (const std::exception&) {
        bad_number(table, row, col, "number");
    }
    if (consumed != s.size()) {
        bad_number(table, row, col, "number");
    }
    return value;
}

} // namespace ocsim::csv
