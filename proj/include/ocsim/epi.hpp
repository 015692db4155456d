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
#ifndef OCSIM_EPI_HPP
#define OCSIM_EPI_HPP

#include "ocsim/rng.hpp"

#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

namespace ocsim::epi
{

struct RegionProfile {
    std::string region_id;
    long long population = 0;
    long long hospital_capacity = 0;
    long long initial_infected = 0;
    double workforce_share = 0.5;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

struct EpiParameters {
    int illness_duration_days = 15;
    double hospitalization_rate = 0.01;
    int los_min_days = 8;
    int los_max_days = 15;
    int overflow_los_min_days = 4;
    int overflow_los_max_days = 8;
    int immunity_duration_days = 30;
    double infectivity = 0.05;
    std::vector<double> contact_schedule; ///< contacts/person/day, indexed by day
    double hospital_mortality_rate = 0.02;
    double community_mortality_rate = 0.001;

    void validate() const;
};

/// Oxygen-concentrator bookkeeping attached to one hospital admission.
enum class OcMark : std::uint8_t {
    none,      ///< patient never needed a unit
    pending,   ///< needs a unit, none free yet
    attached,  ///< holding a unit until discharge
    cancelled, ///< exited before a unit could be attached
};

/// One hospitalized patient, tracked individually so the length of stay and
/// discharge outcome can differ per admission.
struct Admission {
    int admission_day = 0;
    int discharge_day = 0;
    std::uint32_t ordinal = 0; ///< admission index within its day, keys the draws
    bool overflow = false;     ///< admitted while the hospital was at capacity
    OcMark oc = OcMark::none;
};

/// A group of people who entered a stock on the same day and leave together.
struct Cohort {
    int day = 0;
    long long count = 0;
};

/// Reference to an Admission inside EpiState: (discharge day, index in bucket).
using AdmissionRef = std::pair<int, std::uint32_t>;

struct EpiState {
    int day = 0;
    long long population = 0;
    long long susceptible = 0;
    long long infectious = 0;
    long long hospitalized = 0;
    long long deceased = 0;
    long long recovered = 0;

    /// Infection cohorts, oldest first. Counts always sum to `infectious`.
    std::deque<Cohort> infection_cohorts;
    /// Recovery cohorts awaiting the timed return to susceptible.
    std::deque<Cohort> recovery_cohorts;
    /// Admission ledger bucketed by discharge day.
    std::vector<std::vector<Admission>> discharge_buckets;
    /// Admissions created by the most recent step, for downstream consumers.
    std::vector<AdmissionRef> admitted_today;

    long long stock_sum() const { return susceptible + infectious + hospitalized + deceased + recovered; }

    /// Throws InvariantError unless all stocks are non-negative and sum to the
    /// population exactly.
    void check_conservation() const;

    std::vector<Admission>& bucket(int discharge_day);
    const std::vector<Admission>* exits_on(int discharge_day) const;
    Admission& admission(const AdmissionRef& ref);
};

struct EpiDailyOutput {
    std::string region_id;
    int day = 0;
    long long new_infections = 0;
    long long new_admissions = 0;
    long long new_discharges = 0;          ///< live, non-overflow
    long long new_overflow_discharges = 0; ///< live, overflow-flagged
    long long new_deaths = 0;              ///< hospital + community
    long long returns_to_susceptible = 0;
    long long infectious_count = 0;
    long long hospitalized_count = 0;
    double workforce_out_fraction = 0.0;
};

/// Builds the day-0 state: everyone susceptible except the seeded infections,
/// which form a single infection cohort dated day 0.
EpiState init_region(const RegionProfile& profile, const EpiParameters& params);

/// Frequency-dependent incidence: round(c * p * S * I / N), clamped to [0, S].
long long infection_flow(const EpiState& state, double contact_rate, double infectivity);

/// Integer length of stay: U[los_min, los_max] normally, the shorter
/// U[overflow_los_min, overflow_los_max] when the hospital is at capacity.
int sample_los(rng::Stream& stream, bool at_capacity, const EpiParameters& params);

/// Advances the state by one day, applying the six flows in fixed order:
/// infection, hospitalization, cohort recovery, hospital discharge,
/// community death, immunity return. Throws ConfigError when the contact
/// schedule does not cover the day.
EpiDailyOutput step_day(EpiState& state, const RegionProfile& profile, const EpiParameters& params,
                        std::uint64_t seed);

/// Runs `horizon_days` steps from a fresh init_region state.
std::vector<EpiDailyOutput> run_epidemic(const RegionProfile& profile, const EpiParameters& params,
                                         int horizon_days, std::uint64_t seed);

} // namespace ocsim::epi

#endif
