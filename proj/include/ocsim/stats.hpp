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
#ifndef OCSIM_STATS_HPP
#define OCSIM_STATS_HPP

#include <cstddef>
#include <vector>

namespace ocsim::stats
{

/// Standard-normal quantile, p in (0, 1). Acklam's rational approximation,
/// absolute error below 1.2e-9 over the full range.
double normal_quantile(double p);

double mean(const std::vector<double>& values);

/// Population standard deviation (divides by n).
double stddev_pop(const std::vector<double>& values);

} // namespace ocsim::stats

#endif
