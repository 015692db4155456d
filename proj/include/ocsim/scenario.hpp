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
#ifndef OCSIM_SCENARIO_HPP
#define OCSIM_SCENARIO_HPP

#include "ocsim/des.hpp"
#include "ocsim/epi.hpp"
#include "ocsim/network.hpp"
#include "ocsim/oc_demand.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace ocsim::scenario
{

enum class DemandScenario { pre_covid, baseline, increased_contact, increased_usage };

const char* demand_scenario_name(DemandScenario scenario);
const char* inventory_mode_name(des::InventoryMode mode);
const char* transport_strategy_name(des::TransportStrategy strategy);

DemandScenario parse_demand_scenario(const std::string& text);
des::InventoryMode parse_inventory_mode(const std::string& text);
des::TransportStrategy parse_transport_strategy(const std::string& text);

/// One cell of the experiment matrix.
struct ScenarioSpec {
    DemandScenario demand = DemandScenario::baseline;
    des::InventoryMode inventory = des::InventoryMode::static_policy;
    des::TransportStrategy transport = des::TransportStrategy::ground_only;
    int horizon_days = 121;
    std::uint64_t seed = 42;
    int replications = 1;
    double contact_uplift = 1.001;       ///< multiplier (or absolute bump, below)
    bool contact_uplift_relative = true; ///< false: add (contact_uplift - 1) absolutely
    double usage_multiplier = 2.0;
    double increased_inventory_rate = 0.15;

    void validate() const;
};

/// Knobs for sizing the static (pre-pandemic) policies.
struct PolicySizing {
    double cycle_days = 7.0;
    double service_level = 0.95;
    double sigma_d_cv = 0.5;            ///< demand std as a fraction of the mean at aggregate stores
    double assembly_lead_days = 4.0;    ///< production lead assumed by the finished-goods policy
    double assembly_sigma_lt_days = 1.0;
    double part_lead_margin_days = 2.0; ///< producer handling on top of transit, part orders
    double sub_lead_days = 3.0;         ///< production lead assumed by the part-stock policies
    double sub_sigma_lt_days = 1.0;
};

/// Everything a scenario run needs besides the network and the spec.
struct SimInputs {
    std::vector<epi::RegionProfile> regions;
    std::unordered_map<std::string, std::vector<double>> contact_schedules;
    epi::EpiParameters base_epi; ///< contact_schedule left empty, filled per region
    demand::OcUsageRates base_rates;
    des::EngineConfig engine;
    PolicySizing sizing;
};

struct ClassStats {
    double median_days = 0.0;
    double p90_days = 0.0;
    long long completed = 0;
    long long open = 0;
};

struct MetricsReport {
    std::string demand_label;
    std::string inventory_label;
    std::string transport_label;
    int horizon_days = 0;
    int replications = 1;
    std::uint64_t seed = 0;
    double mean_daily_manufacturer_demand = 0.0;
    ClassStats customer;
    ClassStats replenishment;
    std::vector<des::Order> orders;                    ///< pooled across replications
    std::vector<des::Snapshot> snapshots;              ///< first replication
    std::vector<demand::DemandSignal> signals;         ///< first replication, (region, day) order
    std::vector<epi::EpiDailyOutput> epi_series;       ///< first replication, (region, day) order
    std::vector<double> manufacturer_daily_demand;     ///< per day, averaged over replications
    std::vector<des::UtilizationSeries> utilization;   ///< first replication
    std::uint64_t event_count = 0;
    std::uint64_t audit_checks = 0;
};

/// Nearest-rank percentile, p in [0, 100]. Throws ConfigError on empty input.
double percentile(std::vector<double> values, double p);

/// Contact-schedule modifier for the increased-contact scenario; identity for
/// the others.
std::vector<double> apply_contact_scenario(std::vector<double> schedule, const ScenarioSpec& spec);

/// Usage-rate modifier: the increased-usage scenario doubles the three usage
/// rates and raises the hospital inventory rate.
demand::OcUsageRates apply_usage_scenario(const demand::OcUsageRates& base, const ScenarioSpec& spec);

/// Exact inverse of apply_usage_scenario. The inventory rate is a set-to
/// modifier, so its pre-scenario value is needed to undo it.
demand::OcUsageRates invert_usage_scenario(const demand::OcUsageRates& modified, const ScenarioSpec& spec,
                                           double base_inventory_rate);

/// Pre-pandemic policy plan for every store in the network.
des::PolicyPlan build_policy_plan(const net::Network& network, const SimInputs& inputs,
                                  des::TransportStrategy transport);

/// Epidemic + demand coupling for one replication: one signal row per modeled
/// region per day. The pre-covid scenario bypasses the epidemic entirely.
std::unordered_map<std::string, std::vector<des::DailyRegionInput>>
generate_signals(const ScenarioSpec& spec, const SimInputs& inputs, std::uint64_t replication_seed,
                 std::vector<epi::EpiDailyOutput>* epi_series_out = nullptr);

/// Runs one experiment cell end to end (epidemic, demand, supply chain) and
/// aggregates the fulfillment statistics. Deterministic per (spec, seed).
MetricsReport run_scenario(const ScenarioSpec& spec, const net::Network& network, const SimInputs& inputs);

struct ComparisonRow {
    std::string strategy;
    ClassStats customer;
    ClassStats replenishment;
    double mean_daily_manufacturer_demand = 0.0;
};

/// Rows per strategy, columns per order class. All reports must share one
/// demand scenario.
std::vector<ComparisonRow> compare_strategies(const std::vector<MetricsReport>& reports);

} // namespace ocsim::scenario

#endif
