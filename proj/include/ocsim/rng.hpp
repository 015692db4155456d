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
#ifndef OCSIM_RNG_HPP
#define OCSIM_RNG_HPP

#include <cstdint>

namespace ocsim::rng
{

// Named substreams derived from the single run seed. Every random draw in the
// simulator is keyed by (seed, stream, context, index), so adding a new
// consumer never perturbs the draws of existing ones, and the same entity
// receives the same draw across scenario variants (common random numbers).
inline constexpr std::uint64_t kStreamLos              = 1;
inline constexpr std::uint64_t kStreamHospitalOutcome  = 2;
inline constexpr std::uint64_t kStreamOcAttach         = 3;
inline constexpr std::uint64_t kStreamLeadTime         = 4;
inline constexpr std::uint64_t kStreamGeneric          = 5;

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix4(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d)
{
    std::uint64_t h = splitmix64(a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return splitmix64(h ^ d);
}

/// Counter-based generator seeded from a (seed, stream, context, index) key.
/// Cheap to construct; draw as many values as needed.
class Stream
{
public:
    Stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t context = 0, std::uint64_t index = 0)
        : state_(mix4(seed, stream, context, index))
    {
    }

    std::uint64_t next_u64()
    {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double unit()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [lo, hi], inclusive.
    long long uniform_int(long long lo, long long hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long long>(next_u64() % span);
    }

    bool bernoulli(double p)
    {
        return unit() < p;
    }

private:
    std::uint64_t state_;
};

} // namespace ocsim::rng

#endif
