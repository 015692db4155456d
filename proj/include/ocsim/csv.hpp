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
#ifndef OCSIM_CSV_HPP
#define OCSIM_CSV_HPP

#include <string>
#include <vector>

namespace ocsim::csv
{

struct Table {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Reads a comma-separated file and checks the header verbatim. Every row must
/// have exactly as many fields as the header. Throws DataError otherwise.
Table read_file(const std::string& path, const std::string& expected_header);

/// Parses the whole string as CSV text (used by tests).
Table read_text(const std::string& text, const std::string& expected_header, const std::string& label);

long long to_int(const Table& table, std::size_t row, std::size_t col);
double to_double(const Table& table, std::size_t row, std::size_t col);

} // namespace ocsim::csv

#endif
