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
#ifndef OCSIM_OC_DEMAND_HPP
#define OCSIM_OC_DEMAND_HPP

#include "ocsim/epi.hpp"

#include <cstdint>
#include <deque>
#include <string>
#include <utility>

namespace ocsim::demand
{

struct OcUsageRates {
    double hospital_covid_usage = 0.065;    ///< fraction of admissions needing a unit
    double discharge_usage = 0.01;          ///< fraction of discharges ordering a home unit
    double overflow_discharge_usage = 0.02; ///< elevated rate for overflow discharges
    double inventory_rate = 0.10;           ///< replenishment trigger / order fraction
    double scrap_rate = 0.01;               ///< fraction of hospital stock scrapped per day
    double units_per_bed = 0.1;             ///< initial hospital stock per bed
    double precovid_hospital_demand_national = 171.0; ///< units/day, all regions combined
    double precovid_home_demand_national = 545.0;     ///< units/day, all regions combined
    int restock_delay_days = 1; ///< demand-side bookkeeping delay for trigger orders

    void validate() const;
};

/// State-wide hospital oxygen-concentrator stock for one region.
/// `in_use` counts the owned units currently attached to patients, so
/// in_use <= on_hand at all times; idle stock is on_hand - in_use.
struct HospitalOcState {
    std::string region_id;
    long long on_hand = 0;
    long long in_use = 0;
    long long scrapped_cumulative = 0;

    long long pending_need = 0; ///< admissions waiting for a free unit
    std::deque<epi::AdmissionRef> pending_queue;
    std::deque<std::pair<int, long long>> inbound; ///< (arrival_day, qty) trigger orders en route

    long long idle() const { return on_hand - in_use; }
};

/// The per-day, per-region record handed to the supply chain.
struct DemandSignal {
    std::string region_id;
    int day = 0;
    long long hospital_order_qty = 0;
    long long home_order_qty = 0;
    long long covid_patients = 0;
    long long oc_in_use = 0;
    long long oc_on_hand = 0;
    long long oc_scrapped_today = 0;
};

/// Initial hospital stock: round(units_per_bed * beds).
long long initial_stock(long long hospital_capacity_beds, const OcUsageRates& rates);

/// Order quantity from the stock trigger: fires when in_use + requirement
/// exceeds (1 - inventory_rate) of on-hand stock, ordering inventory_rate of
/// the total demand. Returns 0 otherwise.
long long hospital_replenishment_trigger(const HospitalOcState& state, long long current_requirement,
                                         const OcUsageRates& rates);

/// Home-side daily demand: per-discharge usage plus the region's share of the
/// national pre-pandemic baseline.
long long home_demand(const epi::EpiDailyOutput& epi_out, const OcUsageRates& rates,
                      double region_population_share);

/// Scraps round(scrap_rate * on_hand) idle units; units attached to patients
/// are never scrapped. Returns the quantity scrapped today.
long long daily_scrap(HospitalOcState& state, const OcUsageRates& rates);

struct AttachResult {
    long long new_requirement = 0; ///< admissions that needed a unit today
    long long attached = 0;
    long long released = 0;
};

/// Per-admission unit assignment and per-exit release for the day the epidemic
/// state just stepped past. Draws one Bernoulli(hospital_covid_usage) per new
/// admission, keyed by (region, day, ordinal).
AttachResult attach_and_release(epi::EpiState& epi_state, int day, HospitalOcState& state,
                                const OcUsageRates& rates, std::uint64_t seed);

/// Full daily update: deliveries, releases, attachments, scrap, trigger check,
/// baseline demand, signal assembly. `day` must equal epi_out.day.
DemandSignal demand_step(epi::EpiState& epi_state, const epi::EpiDailyOutput& epi_out,
                         HospitalOcState& state, const OcUsageRates& rates, double region_population_share,
                         std::uint64_t seed);

} // namespace ocsim::demand

#endif
