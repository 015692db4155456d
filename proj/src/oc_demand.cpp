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
#include "ocsim/oc_demand.hpp"

#include "ocsim/errors.hpp"
#include "ocsim/rng.hpp"

#include <algorithm>
#include <cmath>

namespace ocsim::demand
{

namespace
{

void check_fraction(double value, const char* name)
{
    if (value < 0.0 || value > 1.0) {
        throw ConfigError(std::string("oc rates: ") + name + " outside [0, 1]");
    }
}

// Stable context key for per-region random draws.
std::uint64_t region_context(const std::string& region_id, int day)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : region_id) {
        h = (h ^ ch) * 1099511628211ULL;
    }
    return rng::splitmix64(h) ^ static_cast<std::uint64_t>(day);
}

} // namespace

void OcUsageRates::validate() const
{
    check_fraction(hospital_covid_usage, "hospital_covid_usage");
    check_fraction(discharge_usage, "discharge_usage");
    check_fraction(overflow_discharge_usage, "overflow_discharge_usage");
    check_fraction(inventory_rate, "inventory_rate");
    check_fraction(scrap_rate, "scrap_rate");
    if (units_per_bed < 0.0) {
        throw ConfigError("oc rates: units_per_bed must be non-negative");
    }
    if (precovid_hospital_demand_national < 0.0 || precovid_home_demand_national < 0.0) {
        throw ConfigError("oc rates: pre-pandemic baselines must be non-negative");
    }
    if (restock_delay_days < 0) {
        throw ConfigError("oc rates: restock_delay_days must be non-negative");
    }
}

long long initial_stock(long long hospital_capacity_beds, const OcUsageRates& rates)
{
    if (hospital_capacity_beds < 0) {
        throw ConfigError("initial_stock: negative bed count");
    }
    return std::llround(rates.units_per_bed * static_cast<double>(hospital_capacity_beds));
}

long long hospital_replenishment_trigger(const HospitalOcState& state, long long current_requirement,
                                         const OcUsageRates& rates)
{
    if (current_requirement < 0) {
        throw ConfigError("hospital_replenishment_trigger: negative requirement");
    }
    const double total_demand = static_cast<double>(state.in_use + current_requirement);
    if (total_demand > (1.0 - rates.inventory_rate) * static_cast<double>(state.on_hand)) {
        return static_cast<long long>(std::ceil(rates.inventory_rate * total_demand));
    }
    return 0;
}

long long home_demand(const epi::EpiDailyOutput& epi_out, const OcUsageRates& rates,
                      double region_population_share)
{
    const long long discharge_units =
        std::llround(rates.discharge_usage * static_cast<double>(epi_out.new_discharges));
    const long long overflow_units =
        std::llround(rates.overflow_discharge_usage * static_cast<double>(epi_out.new_overflow_discharges));
    const long long baseline =
        std::llround(rates.precovid_home_demand_national * region_population_share);
    return discharge_units + overflow_units + baseline;
}

long long daily_scrap(HospitalOcState& state, const OcUsageRates& rates)
{
    const long long wanted = std::llround(rates.scrap_rate * static_cast<double>(state.on_hand));
    const long long scrapped = std::clamp(wanted, 0LL, state.idle());
    state.on_hand -= scrapped;
    state.scrapped_cumulative += scrapped;
    return scrapped;
}

namespace
{

void attach_one(HospitalOcState& state, epi::Admission& adm)
{
    adm.oc = epi::OcMark::attached;
    state.in_use += 1;
}

/// Attach free units to the oldest waiting admissions. Entries cancelled by an
/// exit are dropped lazily.
void fill_pending(epi::EpiState& epi_state, HospitalOcState& state)
{
    while (state.idle() > 0 && !state.pending_queue.empty()) {
        epi::Admission& adm = epi_state.admission(state.pending_queue.front());
        state.pending_queue.pop_front();
        if (adm.oc != epi::OcMark::pending) {
            continue;
        }
        attach_one(state, adm);
        state.pending_need -= 1;
    }
}

} // namespace

AttachResult attach_and_release(epi::EpiState& epi_state, int day, HospitalOcState& state,
                                const OcUsageRates& rates, std::uint64_t seed)
{
    AttachResult result;

    // Exits first: attached units return to idle stock, never-served needs lapse.
    if (const auto* exits = epi_state.exits_on(day)) {
        for (std::uint32_t i = 0; i < exits->size(); ++i) {
            epi::Admission& adm = epi_state.bucket(day)[i];
            if (adm.oc == epi::OcMark::attached) {
                adm.oc = epi::OcMark::none;
                state.in_use -= 1;
                result.released += 1;
            } else if (adm.oc == epi::OcMark::pending) {
                adm.oc = epi::OcMark::cancelled;
                state.pending_need -= 1;
            }
        }
    }

    fill_pending(epi_state, state);

    // One Bernoulli draw per new admission, keyed so the same admission draws
    // the same answer under every scenario sharing the seed.
    const std::uint64_t ctx = region_context(state.region_id, day);
    for (const epi::AdmissionRef& ref : epi_state.admitted_today) {
        epi::Admission& adm = epi_state.admission(ref);
        rng::Stream draw(seed, rng::kStreamOcAttach, ctx, adm.ordinal);
        if (!draw.bernoulli(rates.hospital_covid_usage)) {
            continue;
        }
        result.new_requirement += 1;
        if (state.idle() > 0) {
            attach_one(state, adm);
            result.attached += 1;
        } else {
            adm.oc = epi::OcMark::pending;
            state.pending_need += 1;
            state.pending_queue.push_back(ref);
        }
    }
    return result;
}

DemandSignal demand_step(epi::EpiState& epi_state, const epi::EpiDailyOutput& epi_out,
                         HospitalOcState& state, const OcUsageRates& rates, double region_population_share,
                         std::uint64_t seed)
{
    const int day = epi_out.day;

    // Trigger orders placed earlier arrive on the demand-side ledger today.
    while (!state.inbound.empty() && state.inbound.front().first <= day) {
        state.on_hand += state.inbound.front().second;
        state.inbound.pop_front();
    }

    attach_and_release(epi_state, day, state, rates, seed);
    fill_pending(epi_state, state);

    const long long scrapped_today = daily_scrap(state, rates);

    const long long trigger_qty = hospital_replenishment_trigger(state, state.pending_need, rates);
    if (trigger_qty > 0) {
        state.inbound.emplace_back(day + rates.restock_delay_days, trigger_qty);
    }

    const long long hospital_baseline =
        std::llround(rates.precovid_hospital_demand_national * region_population_share);

    DemandSignal signal;
    signal.region_id = state.region_id;
    signal.day = day;
    signal.hospital_order_qty = trigger_qty + hospital_baseline;
    signal.home_order_qty = home_demand(epi_out, rates, region_population_share);
    signal.covid_patients = epi_out.infectious_count;
    signal.oc_in_use = state.in_use;
    signal.oc_on_hand = state.on_hand;
    signal.oc_scrapped_today = scrapped_today;
    return signal;
}

} // namespace ocsim::demand
