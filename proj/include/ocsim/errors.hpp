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
#ifndef OCSIM_ERRORS_HPP
#define OCSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ocsim
{

/// Bad configuration value or malformed config file. CLI exit code 2.
class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input data (CSV contents). CLI exit code 3.
class DataError : public std::runtime_error
{
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A runtime consistency check failed inside a simulation. CLI exit code 4.
class InvariantError : public std::logic_error
{
public:
    explicit InvariantError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace ocsim

#endif
