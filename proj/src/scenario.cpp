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
#include "ocsim/scenario.hpp"

#include "ocsim/errors.hpp"
#include "ocsim/rng.hpp"
#include "ocsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace ocsim::scenario
{

const char* demand_scenario_name(DemandScenario scenario)
{
    switch (scenario) {
    case DemandScenario::pre_covid: return "pre_covid";
    case DemandScenario::baseline: return "baseline";
    case DemandScenario::increased_contact: return "increased_contact";
    case DemandScenario::increased_usage: return "increased_usage";
    }
    return "?";
}

const char* inventory_mode_name(des::InventoryMode mode)
{
    return mode == des::InventoryMode::static_policy ? "static" : "dynamic";
}

const char* transport_strategy_name(des::TransportStrategy strategy)
{
    return strategy == des::TransportStrategy::ground_only ? "ground_only" : "air_over_500";
}

DemandScenario parse_demand_scenario(const std::string& text)
{
    if (text == "pre_covid") return DemandScenario::pre_covid;
    if (text == "baseline") return DemandScenario::baseline;
    if (text == "increased_contact") return DemandScenario::increased_contact;
    if (text == "increased_usage") return DemandScenario::increased_usage;
    throw ConfigError("unknown demand scenario '" + text + "'");
}

des::InventoryMode parse_inventory_mode(const std::string& text)
{
    if (text == "static") return des::InventoryMode::static_policy;
    if (text == "dynamic") return des::InventoryMode::dynamic_policy;
    throw ConfigError("unknown inventory strategy '" + text + "'");
}

des::TransportStrategy parse_transport_strategy(const std::string& text)
{
    if (text == "ground_only") return des::TransportStrategy::ground_only;
    if (text == "air_over_500") return des::TransportStrategy::air_over_500;
    throw ConfigError("unknown transport strategy '" + text + "'");
}

void ScenarioSpec::validate() const
{
    if (horizon_days < 1) {
        throw ConfigError("scenario: horizon must be at least one day");
    }
    if (replications < 1) {
        throw ConfigError("scenario: replications must be at least 1");
    }
    if (contact_uplift <= 0.0) {
        throw ConfigError("scenario: contact uplift must be positive");
    }
    if (usage_multiplier <= 0.0) {
        throw ConfigError("scenario: usage multiplier must be positive");
    }
    if (increased_inventory_rate < 0.0 || increased_inventory_rate > 1.0) {
        throw ConfigError("scenario: increased inventory rate outside [0, 1]");
    }
}

double percentile(std::vector<double> values, double p)
{
    if (values.empty()) {
        throw ConfigError("percentile of an empty sample");
    }
    if (p < 0.0 || p > 100.0) {
        throw ConfigError("percentile rank outside [0, 100]");
    }
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(p / 100.0 * n)));
    return values[rank - 1];
}

std::vector<double> apply_contact_scenario(std::vector<double> schedule, const ScenarioSpec& spec)
{
    if (spec.demand != DemandScenario::increased_contact) {
        return schedule;
    }
    for (double& c : schedule) {
        if (spec.contact_uplift_relative) {
            c *= spec.contact_uplift;
        } else {
            c += spec.contact_uplift - 1.0;
        }
    }
    return schedule;
}

demand::OcUsageRates apply_usage_scenario(const demand::OcUsageRates& base, const ScenarioSpec& spec)
{
    demand::OcUsageRates rates = base;
    if (spec.demand == DemandScenario::increased_usage) {
        rates.hospital_covid_usage *= spec.usage_multiplier;
        rates.discharge_usage *= spec.usage_multiplier;
        rates.overflow_discharge_usage *= spec.usage_multiplier;
        rates.inventory_rate = spec.increased_inventory_rate;
    }
    return rates;
}

demand::OcUsageRates invert_usage_scenario(const demand::OcUsageRates& modified, const ScenarioSpec& spec,
                                           double base_inventory_rate)
{
    demand::OcUsageRates rates = modified;
    if (spec.demand == DemandScenario::increased_usage) {
        rates.hospital_covid_usage /= spec.usage_multiplier;
        rates.discharge_usage /= spec.usage_multiplier;
        rates.overflow_discharge_usage /= spec.usage_multiplier;
        rates.inventory_rate = base_inventory_rate;
    }
    return rates;
}

namespace
{

double total_population(const std::vector<epi::RegionProfile>& regions)
{
    double total = 0.0;
    for (const auto& r : regions) {
        total += static_cast<double>(r.population);
    }
    return total;
}

double region_share(const epi::RegionProfile& region, double total)
{
    return static_cast<double>(region.population) / total;
}

std::uint64_t region_seed(std::uint64_t replication_seed, std::size_t region_index)
{
    return rng::mix4(replication_seed, rng::kStreamGeneric, static_cast<std::uint64_t>(region_index), 0);
}

} // namespace

des::PolicyPlan build_policy_plan(const net::Network& network, const SimInputs& inputs,
                                  des::TransportStrategy transport)
{
    const PolicySizing& sz = inputs.sizing;
    const demand::OcUsageRates& rates = inputs.base_rates;
    const double national_daily =
        rates.precovid_hospital_demand_national + rates.precovid_home_demand_national;
    const double total_pop = total_population(inputs.regions);
    const double cv = inputs.engine.lead_time_cv;

    des::PolicyPlan plan;
    const net::FacilityNode& assembly = network.node(network.assembly_index);

    // Distributors serving a modeled region get a policy sized on that
    // region's share of the pre-pandemic national demand.
    for (const epi::RegionProfile& region : inputs.regions) {
        int dist_node = -1;
        for (int d : network.distributor_indices) {
            if (network.node(d).region_id == region.region_id) {
                dist_node = d;
            }
        }
        if (dist_node < 0) {
            throw DataError("no distributor serves region '" + region.region_id + "'");
        }
        const double share = region_share(region, total_pop);
        const double mu_d = national_daily * share;
        const double distance = net::distance_miles(assembly, network.node(dist_node));
        const net::TransportMode mode =
            des::select_mode(distance, transport, inputs.engine.transit.air_cutoff_miles);
        const double mu_lt = net::transit_days(distance, mode, inputs.engine.transit);

        des::PolicyInputs pi;
        pi.mu_d = mu_d;
        pi.sigma_d = sz.sigma_d_cv * mu_d;
        pi.cycle_days = sz.cycle_days;
        pi.mu_lt = mu_lt;
        pi.sigma_lt = cv * mu_lt;
        pi.alpha = sz.service_level;
        plan.inputs.emplace(network.node(dist_node).node_id, pi);
    }

    // Finished-goods stock at the assembly facility.
    {
        des::PolicyInputs pi;
        pi.mu_d = national_daily;
        pi.sigma_d = sz.sigma_d_cv * national_daily;
        pi.cycle_days = sz.cycle_days;
        pi.mu_lt = sz.assembly_lead_days;
        pi.sigma_lt = sz.assembly_sigma_lt_days;
        pi.alpha = sz.service_level;
        plan.inputs.emplace(assembly.node_id, pi);
    }

    for (const net::BomStep& step : network.bom) {
        const double part_daily = national_daily * static_cast<double>(step.qty_per_unit);
        const net::FacilityNode& producer = network.node(network.index_of(step.producer_id));

        // Part stock on the assembly floor, replenished from the producer.
        {
            const double distance = net::distance_miles(producer, assembly);
            const net::TransportMode mode = des::select_mode(distance, des::TransportStrategy::air_over_500,
                                                             inputs.engine.transit.air_cutoff_miles);
            const double mu_lt =
                sz.part_lead_margin_days + net::transit_days(distance, mode, inputs.engine.transit);
            des::PolicyInputs pi;
            pi.mu_d = part_daily;
            pi.sigma_d = sz.sigma_d_cv * part_daily;
            pi.cycle_days = sz.cycle_days;
            pi.mu_lt = mu_lt;
            pi.sigma_lt = cv * mu_lt;
            pi.alpha = sz.service_level;
            plan.inputs.emplace(assembly.node_id + "#part:" + step.part_type, pi);
        }

        // Finished-part stock at the producer, replenished by its own line.
        {
            des::PolicyInputs pi;
            pi.mu_d = part_daily;
            pi.sigma_d = sz.sigma_d_cv * part_daily;
            pi.cycle_days = sz.cycle_days;
            pi.mu_lt = sz.sub_lead_days;
            pi.sigma_lt = sz.sub_sigma_lt_days;
            pi.alpha = sz.service_level;
            plan.inputs.emplace(step.producer_id, pi);
        }

        // Raw-material stock at the producer, replenished from the nearest
        // supplier of the part family.
        {
            const auto& pool = network.suppliers_by_part[static_cast<std::size_t>(step.step - 1)];
            double mu_lt = sz.sub_lead_days;
            if (!pool.empty()) {
                double best = 1e18;
                for (int s : pool) {
                    best = std::min(best, net::distance_miles(producer, network.node(s)));
                }
                const net::TransportMode mode = des::select_mode(best, des::TransportStrategy::air_over_500,
                                                                 inputs.engine.transit.air_cutoff_miles);
                mu_lt = inputs.engine.supplier_handling_days + net::transit_days(best, mode, inputs.engine.transit);
            }
            const double raw_daily = part_daily * static_cast<double>(inputs.engine.raw_units_per_part);
            des::PolicyInputs pi;
            pi.mu_d = raw_daily;
            pi.sigma_d = sz.sigma_d_cv * raw_daily;
            pi.cycle_days = sz.cycle_days;
            pi.mu_lt = mu_lt;
            pi.sigma_lt = cv * mu_lt;
            pi.alpha = sz.service_level;
            plan.inputs.emplace(step.producer_id + "#raw", pi);
        }
    }

    return plan;
}

std::unordered_map<std::string, std::vector<des::DailyRegionInput>>
generate_signals(const ScenarioSpec& spec, const SimInputs& inputs, std::uint64_t replication_seed,
                 std::vector<epi::EpiDailyOutput>* epi_series_out)
{
    spec.validate();
    const demand::OcUsageRates rates = apply_usage_scenario(inputs.base_rates, spec);
    rates.validate();
    const double total_pop = total_population(inputs.regions);

    std::unordered_map<std::string, std::vector<des::DailyRegionInput>> signals;

    for (std::size_t r = 0; r < inputs.regions.size(); ++r) {
        const epi::RegionProfile& region = inputs.regions[r];
        const double share = region_share(region, total_pop);
        std::vector<des::DailyRegionInput> days;
        days.reserve(static_cast<std::size_t>(spec.horizon_days));

        if (spec.demand == DemandScenario::pre_covid) {
            // Epidemic bypassed: only the baseline demand flows.
            const long long hospital = std::llround(rates.precovid_hospital_demand_national * share);
            const long long home = std::llround(rates.precovid_home_demand_national * share);
            for (int d = 0; d < spec.horizon_days; ++d) {
                des::DailyRegionInput input;
                input.signal.region_id = region.region_id;
                input.signal.day = d;
                input.signal.hospital_order_qty = hospital;
                input.signal.home_order_qty = home;
                days.push_back(std::move(input));
            }
            signals.emplace(region.region_id, std::move(days));
            continue;
        }

        const auto sched_it = inputs.contact_schedules.find(region.region_id);
        if (sched_it == inputs.contact_schedules.end()) {
            throw DataError("no contact schedule for region '" + region.region_id + "'");
        }
        epi::EpiParameters params = inputs.base_epi;
        params.contact_schedule = apply_contact_scenario(sched_it->second, spec);

        const std::uint64_t seed = region_seed(replication_seed, r);
        epi::EpiState state = epi::init_region(region, params);
        demand::HospitalOcState oc_state;
        oc_state.region_id = region.region_id;
        oc_state.on_hand = demand::initial_stock(region.hospital_capacity, rates);

        for (int d = 0; d < spec.horizon_days; ++d) {
            const epi::EpiDailyOutput out = epi::step_day(state, region, params, seed);
            des::DailyRegionInput input;
            input.signal = demand::demand_step(state, out, oc_state, rates, share, seed);
            input.workforce_out_fraction = out.workforce_out_fraction;
            if (epi_series_out) {
                epi_series_out->push_back(out);
            }
            days.push_back(std::move(input));
        }
        signals.emplace(region.region_id, std::move(days));
    }

    return signals;
}

namespace
{

ClassStats class_stats(const std::vector<des::Order>& orders, des::OrderClass klass)
{
    std::vector<double> durations;
    ClassStats stats;
    for (const des::Order& o : orders) {
        if (o.klass != klass) {
            continue;
        }
        if (o.open()) {
            ++stats.open;
        } else {
            durations.push_back(o.fulfilled_at - o.placed_at);
        }
    }
    stats.completed = static_cast<long long>(durations.size());
    if (!durations.empty()) {
        stats.median_days = percentile(durations, 50.0);
        stats.p90_days = percentile(durations, 90.0);
    }
    return stats;
}

} // namespace

MetricsReport run_scenario(const ScenarioSpec& spec, const net::Network& network, const SimInputs& inputs)
{
    spec.validate();

    des::EngineConfig engine = inputs.engine;
    engine.inventory = spec.inventory;
    engine.transport = spec.transport;

    std::vector<std::string> region_ids;
    std::vector<double> weights;
    const double total_pop = total_population(inputs.regions);
    for (const auto& region : inputs.regions) {
        region_ids.push_back(region.region_id);
        weights.push_back(region_share(region, total_pop));
    }

    const des::PolicyPlan plan = build_policy_plan(network, inputs, spec.transport);

    MetricsReport report;
    report.demand_label = demand_scenario_name(spec.demand);
    report.inventory_label = inventory_mode_name(spec.inventory);
    report.transport_label = transport_strategy_name(spec.transport);
    report.horizon_days = spec.horizon_days;
    report.replications = spec.replications;
    report.seed = spec.seed;
    report.manufacturer_daily_demand.assign(static_cast<std::size_t>(spec.horizon_days), 0.0);

    // Replications are independent given their seeds, so they run in parallel;
    // results merge afterwards in replication order to keep the report
    // deterministic.
    struct RepOutput {
        des::RunResult run;
        std::vector<epi::EpiDailyOutput> epi_series;
        std::vector<demand::DemandSignal> signals;
    };
    auto run_replication = [&](int rep) {
        const std::uint64_t rep_seed = spec.seed + static_cast<std::uint64_t>(rep);
        RepOutput out;
        const auto signals =
            generate_signals(spec, inputs, rep_seed, rep == 0 ? &out.epi_series : nullptr);
        out.run = des::run(network, engine, plan, region_ids, weights, signals, spec.horizon_days, rep_seed);
        if (rep == 0) {
            for (const std::string& region : region_ids) {
                for (const des::DailyRegionInput& input : signals.at(region)) {
                    out.signals.push_back(input.signal);
                }
            }
        }
        return out;
    };

    std::vector<std::future<RepOutput>> futures;
    for (int rep = 1; rep < spec.replications; ++rep) {
        futures.push_back(std::async(std::launch::async, run_replication, rep));
    }

    for (int rep = 0; rep < spec.replications; ++rep) {
        RepOutput out = rep == 0 ? run_replication(0) : futures[static_cast<std::size_t>(rep - 1)].get();

        const std::uint64_t id_offset = static_cast<std::uint64_t>(report.orders.size());
        for (des::Order o : out.run.orders) {
            o.order_id += id_offset;
            report.orders.push_back(std::move(o));
        }
        for (std::size_t d = 0; d < out.run.manufacturer_daily_order_qty.size(); ++d) {
            report.manufacturer_daily_demand[d] +=
                static_cast<double>(out.run.manufacturer_daily_order_qty[d]) / spec.replications;
        }
        report.event_count += out.run.event_count;
        report.audit_checks += out.run.audit_checks;

        if (rep == 0) {
            report.snapshots = std::move(out.run.snapshots);
            report.utilization = std::move(out.run.utilization);
            report.epi_series = std::move(out.epi_series);
            report.signals = std::move(out.signals);
        }
    }

    report.customer = class_stats(report.orders, des::OrderClass::customer);
    report.replenishment = class_stats(report.orders, des::OrderClass::distributor_replenishment);
    report.mean_daily_manufacturer_demand = stats::mean(report.manufacturer_daily_demand);
    return report;
}

std::vector<ComparisonRow> compare_strategies(const std::vector<MetricsReport>& reports)
{
    std::vector<ComparisonRow> rows;
    for (const MetricsReport& report : reports) {
        if (report.demand_label != reports.front().demand_label) {
            throw ConfigError("compare_strategies: reports span different demand scenarios");
        }
        ComparisonRow row;
        row.strategy = report.inventory_label + std::string("+") + report.transport_label;
        row.customer = report.customer;
        row.replenishment = report.replenishment;
        row.mean_daily_manufacturer_demand = report.mean_daily_manufacturer_demand;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace ocsim::scenario
