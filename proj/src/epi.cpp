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
#include "ocsim/epi.hpp"

#include "ocsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ocsim::epi
{

void RegionProfile::validate() const
{
    if (region_id.empty()) {
        throw ConfigError("region profile: empty region_id");
    }
    if (population <= 0) {
        throw ConfigError("region " + region_id + ": population must be positive");
    }
    if (initial_infected < 0 || initial_infected > population) {
        throw ConfigError("region " + region_id + ": initial_infected outside [0, population]");
    }
    if (hospital_capacity < 0) {
        throw ConfigError("region " + region_id + ": hospital_capacity must be non-negative");
    }
    if (workforce_share < 0.0 || workforce_share > 1.0) {
        throw ConfigError("region " + region_id + ": workforce_share outside [0, 1]");
    }
}

namespace
{

void check_rate(double value, const char* name)
{
    if (value < 0.0 || value > 1.0) {
        throw ConfigError(std::string("epi parameters: ") + name + " outside [0, 1]");
    }
}

} // namespace

void EpiParameters::validate() const
{
    if (illness_duration_days <= 0) {
        throw ConfigError("epi parameters: illness_duration must be positive");
    }
    if (immunity_duration_days <= 0) {
        throw ConfigError("epi parameters: immunity_duration must be positive");
    }
    if (los_min_days < 0 || los_min_days > los_max_days) {
        throw ConfigError("epi parameters: length-of-stay bounds require 0 <= min <= max");
    }
    if (overflow_los_min_days < 0 || overflow_los_min_days > overflow_los_max_days) {
        throw ConfigError("epi parameters: overflow length-of-stay bounds require 0 <= min <= max");
    }
    check_rate(hospitalization_rate, "hospitalization_rate");
    check_rate(infectivity, "infectivity");
    check_rate(hospital_mortality_rate, "hospital_mortality_rate");
    check_rate(community_mortality_rate, "community_mortality_rate");
    for (double c : contact_schedule) {
        if (c < 0.0) {
            throw ConfigError("epi parameters: contact rates must be non-negative");
        }
    }
}

void EpiState::check_conservation() const
{
    if (susceptible < 0 || infectious < 0 || hospitalized < 0 || deceased < 0 || recovered < 0) {
        throw InvariantError("epi state: negative stock on day " + std::to_string(day));
    }
    if (stock_sum() != population) {
        throw InvariantError("epi state: stocks sum to " + std::to_string(stock_sum()) + " != population " +
                             std::to_string(population) + " on day " + std::to_string(day));
    }
}

std::vector<Admission>& EpiState::bucket(int discharge_day)
{
    if (discharge_day >= static_cast<int>(discharge_buckets.size())) {
        discharge_buckets.resize(static_cast<std::size_t>(discharge_day) + 1);
    }
    return discharge_buckets[static_cast<std::size_t>(discharge_day)];
}

const std::vector<Admission>* EpiState::exits_on(int discharge_day) const
{
    if (discharge_day < 0 || discharge_day >= static_cast<int>(discharge_buckets.size())) {
        return nullptr;
    }
    return &discharge_buckets[static_cast<std::size_t>(discharge_day)];
}

Admission& EpiState::admission(const AdmissionRef& ref)
{
    return discharge_buckets[static_cast<std::size_t>(ref.first)][ref.second];
}

EpiState init_region(const RegionProfile& profile, const EpiParameters& params)
{
    profile.validate();
    params.validate();

    EpiState state;
    state.day = 0;
    state.population = profile.population;
    state.infectious = profile.initial_infected;
    state.susceptible = profile.population - profile.initial_infected;
    if (profile.initial_infected > 0) {
        state.infection_cohorts.push_back({0, profile.initial_infected});
    }
    state.check_conservation();
    return state;
}

long long infection_flow(const EpiState& state, double contact_rate, double infectivity)
{
    if (state.susceptible == 0 || state.infectious == 0) {
        return 0;
    }
    const double s = static_cast<double>(state.susceptible);
    const double i = static_cast<double>(state.infectious);
    const double n = static_cast<double>(state.population);
    const long long flow = std::llround(contact_rate * infectivity * s * i / n);
    return std::clamp(flow, 0LL, state.susceptible);
}

int sample_los(rng::Stream& stream, bool at_capacity, const EpiParameters& params)
{
    if (at_capacity) {
        return static_cast<int>(stream.uniform_int(params.overflow_los_min_days, params.overflow_los_max_days));
    }
    return static_cast<int>(stream.uniform_int(params.los_min_days, params.los_max_days));
}

namespace
{

/// Removes `count` people from the infection cohorts, oldest first. The people
/// hospitalized or deceased on a day are attributed to the longest-standing
/// infections, so timed cohort recoveries release only who is still infectious.
void drain_cohorts(std::deque<Cohort>& cohorts, long long count)
{
    while (count > 0) {
        Cohort& front = cohorts.front();
        const long long take = std::min(front.count, count);
        front.count -= take;
        count -= take;
        if (front.count == 0) {
            cohorts.pop_front();
        }
    }
}

} // namespace

EpiDailyOutput step_day(EpiState& state, const RegionProfile& profile, const EpiParameters& params,
                        std::uint64_t seed)
{
    const int day = state.day;
    if (day < 0 || day >= static_cast<int>(params.contact_schedule.size())) {
        throw ConfigError("contact schedule does not cover day " + std::to_string(day) + " for region " +
                          profile.region_id);
    }

    EpiDailyOutput out;
    out.region_id = profile.region_id;
    out.day = day;
    state.admitted_today.clear();

    // (1) Infection S -> I.
    const long long new_infections = infection_flow(state, params.contact_schedule[day], params.infectivity);
    state.susceptible -= new_infections;
    state.infectious += new_infections;
    if (new_infections > 0) {
        state.infection_cohorts.push_back({day, new_infections});
    }
    out.new_infections = new_infections;

    // (2) Hospitalization I -> H, one admission at a time so each gets its own
    // length of stay and an overflow flag reflecting occupancy at that moment.
    long long admissions = std::llround(params.hospitalization_rate * static_cast<double>(state.infectious));
    admissions = std::clamp(admissions, 0LL, state.infectious);
    for (long long k = 0; k < admissions; ++k) {
        const bool at_capacity = state.hospitalized >= profile.hospital_capacity;
        rng::Stream los_stream(seed, rng::kStreamLos, static_cast<std::uint64_t>(day),
                               static_cast<std::uint64_t>(k));
        const int los = sample_los(los_stream, at_capacity, params);
        const int discharge_day = day + std::max(1, los);
        auto& bucket = state.bucket(discharge_day);
        bucket.push_back({day, discharge_day, static_cast<std::uint32_t>(k), at_capacity, OcMark::none});
        state.admitted_today.emplace_back(discharge_day, static_cast<std::uint32_t>(bucket.size() - 1));
        state.hospitalized += 1;
    }
    drain_cohorts(state.infection_cohorts, admissions);
    state.infectious -= admissions;
    out.new_admissions = admissions;

    // (3) Timed recoveries I -> R for cohorts that reached the illness duration.
    long long cohort_recoveries = 0;
    while (!state.infection_cohorts.empty() &&
           day - state.infection_cohorts.front().day >= params.illness_duration_days) {
        cohort_recoveries += state.infection_cohorts.front().count;
        state.infection_cohorts.pop_front();
    }
    state.infectious -= cohort_recoveries;
    state.recovered += cohort_recoveries;

    // (4) Ledger discharges H -> R, or H -> D per-patient.
    long long live_discharges = 0;
    if (const auto* exits = state.exits_on(day)) {
        for (const Admission& adm : *exits) {
            rng::Stream outcome(seed, rng::kStreamHospitalOutcome,
                                static_cast<std::uint64_t>(adm.admission_day), adm.ordinal);
            state.hospitalized -= 1;
            if (outcome.bernoulli(params.hospital_mortality_rate)) {
                state.deceased += 1;
                out.new_deaths += 1;
            } else {
                state.recovered += 1;
                live_discharges += 1;
                if (adm.overflow) {
                    out.new_overflow_discharges += 1;
                } else {
                    out.new_discharges += 1;
                }
            }
        }
    }
    if (cohort_recoveries + live_discharges > 0) {
        state.recovery_cohorts.push_back({day, cohort_recoveries + live_discharges});
    }

    // (5) Community deaths I -> D.
    long long community_deaths =
        std::llround(params.community_mortality_rate * static_cast<double>(state.infectious));
    community_deaths = std::clamp(community_deaths, 0LL, state.infectious);
    drain_cohorts(state.infection_cohorts, community_deaths);
    state.infectious -= community_deaths;
    state.deceased += community_deaths;
    out.new_deaths += community_deaths;

    // (6) Immunity returns R -> S, exactly immunity_duration days after recovery.
    long long returns = 0;
    while (!state.recovery_cohorts.empty() &&
           day - state.recovery_cohorts.front().day >= params.immunity_duration_days) {
        returns += state.recovery_cohorts.front().count;
        state.recovery_cohorts.pop_front();
    }
    state.recovered -= returns;
    state.susceptible += returns;
    out.returns_to_susceptible = returns;

    state.day = day + 1;
    state.check_conservation();

    out.infectious_count = state.infectious;
    out.hospitalized_count = state.hospitalized;
    out.workforce_out_fraction = static_cast<double>(state.infectious) / static_cast<double>(state.population);
    return out;
}

std::vector<EpiDailyOutput> run_epidemic(const RegionProfile& profile, const EpiParameters& params,
                                         int horizon_days, std::uint64_t seed)
{
    if (horizon_days < 1) {
        throw ConfigError("run_epidemic: horizon must be at least one day");
    }
    EpiState state = init_region(profile, params);
    std::vector<EpiDailyOutput> series;
    series.reserve(static_cast<std::size_t>(horizon_days));
    for (int d = 0; d < horizon_days; ++d) {
        series.push_back(step_day(state, profile, params, seed));
    }
    return series;
}

} // namespace ocsim::epi
