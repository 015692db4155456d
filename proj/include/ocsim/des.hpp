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
#ifndef OCSIM_DES_HPP
#define OCSIM_DES_HPP

#include "ocsim/network.hpp"
#include "ocsim/oc_demand.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace ocsim::des
{

enum class EventKind {
    customer_order_arrival,
    replenishment_order_arrival,
    shipment_departure,
    shipment_arrival,
    assembly_job_complete,
    policy_review,
    demand_signal_tick,
};

enum class OrderClass { customer, distributor_replenishment, assembly_parts };

enum class InventoryMode { static_policy, dynamic_policy };

enum class TransportStrategy { ground_only, air_over_500 };

const char* order_class_name(OrderClass klass);

/// Inputs of a continuous-review (Q,R) policy.
struct PolicyInputs {
    double mu_d = 0.0;      ///< demand mean, units/day
    double sigma_d = 0.0;   ///< demand std, units/day
    double cycle_days = 7.0;
    double mu_lt = 0.0;     ///< replenishment lead-time mean, days
    double sigma_lt = 0.0;  ///< lead-time std, days
    double alpha = 0.95;    ///< cycle service level
};

struct QrPair {
    long long q = 0;
    long long r = 0;
};

/// Q = ceil(mu_D * T), floored at one unit. R = ceil(mu_D * mu_LT +
/// z_alpha * sqrt(mu_LT * sigma_D^2 + mu_D^2 * sigma_LT^2)).
/// Rejects alpha outside [0.5, 1).
QrPair qr_parameters(const PolicyInputs& inputs);

/// Number of orders of size q needed to lift the inventory position back to
/// at least r. Zero when position >= r (strict-below trigger).
long long reorder_count(long long position, const QrPair& qr);

/// Air only when the strategy allows it and the distance strictly exceeds the
/// cutoff; ground otherwise.
net::TransportMode select_mode(double distance_miles, TransportStrategy strategy, double cutoff_miles);

struct Order {
    std::uint64_t order_id = 0;
    OrderClass klass = OrderClass::customer;
    std::string origin;
    std::string destination; ///< facility that serves the order
    long long qty = 0;
    double placed_at = 0.0;
    double fulfilled_at = -1.0; ///< < 0 while open
    net::TransportMode mode = net::TransportMode::ground;

    bool open() const { return fulfilled_at < 0.0; }
};

/// One day of one region, as produced by the demand side.
struct DailyRegionInput {
    demand::DemandSignal signal;
    double workforce_out_fraction = 0.0;
};

/// Policy and stock assignments per store. Store keys: "<node_id>" for a
/// facility's main item, "<node_id>#part:<type>" for assembly-side part
/// stocks, "<node_id>#raw" for subassembly raw-material stocks.
struct PolicyPlan {
    std::unordered_map<std::string, PolicyInputs> inputs;
    std::unordered_map<std::string, long long> initial_on_hand;
};

struct EngineConfig {
    InventoryMode inventory = InventoryMode::static_policy;
    TransportStrategy transport = TransportStrategy::ground_only;
    net::TransitParams transit;
    double lead_time_cv = 0.0; ///< multiplicative transit noise; 0 keeps transit exact
    int review_period_days = 7;
    double supplier_handling_days = 0.25;
    double default_assembly_rate = 1500.0;    ///< used when the node carries no capacity
    double default_subassembly_rate = 3600.0;
    long long raw_units_per_part = 1;
    bool split_unit_orders = false; ///< emit customer demand as single-unit orders
    bool audit = true;              ///< verify the inventory identity after every event
    bool record_event_trace = false; ///< keep the dequeue trace (tests)
};

struct EventRecord {
    double t = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::demand_signal_tick;
};

struct Snapshot {
    int day = 0;
    std::string store;
    long long on_hand = 0;
    long long position = 0;
    long long backlog = 0;
};

/// Per-store unit flows over the run, for conservation checks.
struct StoreFlow {
    std::string store;
    long long initial = 0;
    long long received = 0;
    long long produced = 0;
    long long shipped = 0;
    long long consumed = 0;
    long long final_on_hand = 0;
};

struct UtilizationSeries {
    std::string facility;
    std::vector<double> busy_fraction; ///< per day
};

struct RunResult {
    std::vector<Order> orders;
    std::vector<Snapshot> snapshots;
    std::vector<long long> manufacturer_daily_order_qty; ///< replenishment qty placed per day
    std::vector<StoreFlow> flows;
    std::vector<UtilizationSeries> utilization;
    std::vector<EventRecord> event_trace; ///< only when record_event_trace is set
    std::uint64_t event_count = 0;
    std::uint64_t audit_checks = 0;
};

/// Runs one replication. `regions` fixes the injection order; signals_by_region
/// must contain horizon_days entries per listed region. `region_weights` are
/// population shares used to average workforce illness for facilities outside
/// the modeled regions. Deterministic for fixed inputs and seed.
RunResult run(const net::Network& network, const EngineConfig& config, const PolicyPlan& plan,
              const std::vector<std::string>& regions, const std::vector<double>& region_weights,
              const std::unordered_map<std::string, std::vector<DailyRegionInput>>& signals_by_region,
              int horizon_days, std::uint64_t seed);

} // namespace ocsim::des

#endif
