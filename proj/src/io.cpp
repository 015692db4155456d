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
#include "ocsim/io.hpp"

#include "ocsim/csv.hpp"
#include "ocsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace ocsim::io
{

namespace
{

std::string fmt(double value, int decimals = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary); // '\n' line endings on every platform
    if (!out) {
        throw DataError("cannot write '" + path + "'");
    }
    return out;
}

} // namespace

void ensure_dir(const std::string& path)
{
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) {
        throw DataError("cannot create directory '" + path + "': " + ec.message());
    }
}

std::vector<epi::RegionProfile> ingest_regions(const std::string& csv_path, double workforce_share)
{
    const csv::Table table = csv::read_file(csv_path, "region_id,population,hospital_capacity,initial_infected");
    std::vector<epi::RegionProfile> regions;
    regions.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        epi::RegionProfile profile;
        profile.region_id = table.rows[r][0];
        profile.population = csv::to_int(table, r, 1);
        profile.hospital_capacity = csv::to_int(table, r, 2);
        profile.initial_infected = csv::to_int(table, r, 3);
        profile.workforce_share = workforce_share;
        try {
            profile.validate();
        } catch (const ConfigError& err) {
            throw DataError(csv_path + ": row " + std::to_string(r + 2) + ": " + err.what());
        }
        for (const auto& existing : regions) {
            if (existing.region_id == profile.region_id) {
                throw DataError(csv_path + ": duplicate region '" + profile.region_id + "'");
            }
        }
        regions.push_back(std::move(profile));
    }
    if (regions.empty()) {
        throw DataError(csv_path + ": no regions");
    }
    return regions;
}

std::unordered_map<std::string, std::vector<double>> ingest_contacts(const std::string& csv_path)
{
    const csv::Table table = csv::read_file(csv_path, "region_id,day,contacts");
    std::unordered_map<std::string, std::vector<double>> schedules;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string& region = table.rows[r][0];
        const long long day = csv::to_int(table, r, 1);
        const double contacts = csv::to_double(table, r, 2);
        if (day < 0) {
            throw DataError(csv_path + ": negative day index in row " + std::to_string(r + 2));
        }
        if (contacts < 0.0) {
            throw DataError(csv_path + ": negative contact rate in row " + std::to_string(r + 2));
        }
        auto& sched = schedules[region];
        if (static_cast<std::size_t>(day) != sched.size()) {
            throw DataError(csv_path + ": days for region '" + region +
                            "' must be contiguous from 0 (row " + std::to_string(r + 2) + ")");
        }
        sched.push_back(contacts);
    }
    return schedules;
}

std::map<std::string, std::vector<double>> ingest_actual_cases(const std::string& csv_path)
{
    const csv::Table table = csv::read_file(csv_path, "region_id,day,active_cases");
    std::map<std::string, std::vector<double>> series;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string& region = table.rows[r][0];
        const long long day = csv::to_int(table, r, 1);
        auto& values = series[region];
        if (static_cast<std::size_t>(day) != values.size()) {
            throw DataError(csv_path + ": days for region '" + region +
                            "' must be contiguous from 0 (row " + std::to_string(r + 2) + ")");
        }
        values.push_back(csv::to_double(table, r, 2));
    }
    return series;
}

std::vector<FitRow> validate_against_actuals(const std::map<std::string, std::vector<double>>& model,
                                             const std::map<std::string, std::vector<double>>& actual)
{
    std::vector<FitRow> rows;
    for (const auto& [region, model_series] : model) {
        const auto it = actual.find(region);
        if (it == actual.end()) {
            throw DataError("no reported case series for region '" + region + "'");
        }
        const auto& actual_series = it->second;
        const std::size_t n = std::min(model_series.size(), actual_series.size());
        if (n == 0) {
            throw DataError("empty case series for region '" + region + "'");
        }

        FitRow row;
        row.region_id = region;
        double ape_sum = 0.0;
        std::size_t ape_n = 0;
        double sq_sum = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            const double diff = model_series[d] - actual_series[d];
            sq_sum += diff * diff;
            if (actual_series[d] > 0.0) {
                ape_sum += std::abs(diff) / actual_series[d];
                ++ape_n;
            }
        }
        row.mape_pct = ape_n > 0 ? 100.0 * ape_sum / static_cast<double>(ape_n) : 0.0;
        row.rmse = std::sqrt(sq_sum / static_cast<double>(n));
        row.peak_day_model = static_cast<int>(
            std::max_element(model_series.begin(), model_series.begin() + static_cast<long>(n)) -
            model_series.begin());
        row.peak_day_actual = static_cast<int>(
            std::max_element(actual_series.begin(), actual_series.begin() + static_cast<long>(n)) -
            actual_series.begin());
        row.peak_offset = row.peak_day_model - row.peak_day_actual;
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit_run_outputs(const scenario::MetricsReport& report, const std::string& out_dir)
{
    ensure_dir(out_dir);
    ensure_dir(out_dir + "/timeseries");

    {
        auto out = open_out(out_dir + "/signals.csv");
        out << "region_id,day,hospital_order_qty,home_order_qty,covid_patients,oc_in_use,oc_on_hand,"
               "oc_scrapped_today\n";
        for (const auto& s : report.signals) {
            out << s.region_id << ',' << s.day << ',' << s.hospital_order_qty << ',' << s.home_order_qty << ','
                << s.covid_patients << ',' << s.oc_in_use << ',' << s.oc_on_hand << ',' << s.oc_scrapped_today
                << '\n';
        }
    }

    {
        auto out = open_out(out_dir + "/orders.csv");
        out << "order_id,class,origin,destination,qty,placed_at,fulfilled_at,mode\n";
        for (const auto& o : report.orders) {
            out << o.order_id << ',' << des::order_class_name(o.klass) << ',' << o.origin << ','
                << o.destination << ',' << o.qty << ',' << fmt(o.placed_at) << ','
                << (o.open() ? std::string("open") : fmt(o.fulfilled_at)) << ',' << net::mode_name(o.mode)
                << '\n';
        }
    }

    {
        std::vector<des::Snapshot> rows = report.snapshots;
        std::stable_sort(rows.begin(), rows.end(), [](const des::Snapshot& a, const des::Snapshot& b) {
            if (a.store != b.store) {
                return a.store < b.store;
            }
            return a.day < b.day;
        });
        auto out = open_out(out_dir + "/inventory.csv");
        out << "facility,day,on_hand,position,backlog\n";
        for (const auto& s : rows) {
            out << s.store << ',' << s.day << ',' << s.on_hand << ',' << s.position << ',' << s.backlog << '\n';
        }
    }

    write_report_csv({report}, out_dir + "/report.csv");

    {
        auto out = open_out(out_dir + "/meta.csv");
        out << "demand_scenario,inventory_strategy,transport_strategy,horizon_days,replications,seed\n";
        out << report.demand_label << ',' << report.inventory_label << ',' << report.transport_label << ','
            << report.horizon_days << ',' << report.replications << ',' << report.seed << '\n';
    }

    {
        auto out = open_out(out_dir + "/timeseries/epidemic.csv");
        out << "region_id,day,new_infections,new_admissions,new_discharges,new_overflow_discharges,"
               "new_deaths,returns_to_susceptible,infectious,hospitalized,workforce_out_fraction\n";
        for (const auto& e : report.epi_series) {
            out << e.region_id << ',' << e.day << ',' << e.new_infections << ',' << e.new_admissions << ','
                << e.new_discharges << ',' << e.new_overflow_discharges << ',' << e.new_deaths << ','
                << e.returns_to_susceptible << ',' << e.infectious_count << ',' << e.hospitalized_count << ','
                << fmt(e.workforce_out_fraction, 6) << '\n';
        }
    }

    {
        auto out = open_out(out_dir + "/timeseries/oc_orders.csv");
        out << "region_id,day,hospital_order_qty,home_order_qty\n";
        for (const auto& s : report.signals) {
            out << s.region_id << ',' << s.day << ',' << s.hospital_order_qty << ',' << s.home_order_qty << '\n';
        }
    }

    {
        auto out = open_out(out_dir + "/timeseries/oc_availability.csv");
        out << "region_id,day,on_hand,in_use,idle\n";
        for (const auto& s : report.signals) {
            out << s.region_id << ',' << s.day << ',' << s.oc_on_hand << ',' << s.oc_in_use << ','
                << (s.oc_on_hand - s.oc_in_use) << '\n';
        }
    }

    {
        auto out = open_out(out_dir + "/timeseries/manufacturer_demand.csv");
        out << "day,order_qty\n";
        for (std::size_t d = 0; d < report.manufacturer_daily_demand.size(); ++d) {
            out << d << ',' << fmt(report.manufacturer_daily_demand[d]) << '\n';
        }
    }

    {
        auto out = open_out(out_dir + "/timeseries/backlog.csv");
        out << "facility,day,backlog\n";
        std::vector<des::Snapshot> rows = report.snapshots;
        std::stable_sort(rows.begin(), rows.end(), [](const des::Snapshot& a, const des::Snapshot& b) {
            if (a.store != b.store) {
                return a.store < b.store;
            }
            return a.day < b.day;
        });
        for (const auto& s : rows) {
            out << s.store << ',' << s.day << ',' << s.backlog << '\n';
        }
    }

    {
        auto out = open_out(out_dir + "/timeseries/utilization.csv");
        out << "facility,day,busy_fraction\n";
        for (const auto& u : report.utilization) {
            for (std::size_t d = 0; d < u.busy_fraction.size(); ++d) {
                out << u.facility << ',' << d << ',' << fmt(u.busy_fraction[d]) << '\n';
            }
        }
    }
}

void write_report_csv(const std::vector<scenario::MetricsReport>& reports, const std::string& path)
{
    auto out = open_out(path);
    out << "demand_scenario,inventory_strategy,transport_strategy,"
           "customer_median_days,customer_p90_days,customer_completed,customer_open,"
           "replenishment_median_days,replenishment_p90_days,replenishment_completed,replenishment_open,"
           "mean_daily_manufacturer_demand\n";
    for (const auto& r : reports) {
        out << r.demand_label << ',' << r.inventory_label << ',' << r.transport_label << ','
            << fmt(r.customer.median_days) << ',' << fmt(r.customer.p90_days) << ',' << r.customer.completed
            << ',' << r.customer.open << ',' << fmt(r.replenishment.median_days) << ','
            << fmt(r.replenishment.p90_days) << ',' << r.replenishment.completed << ',' << r.replenishment.open
            << ',' << fmt(r.mean_daily_manufacturer_demand) << '\n';
    }
}

void write_validation_csv(const std::vector<FitRow>& rows, const std::string& path)
{
    auto out = open_out(path);
    out << "region_id,mape_pct,rmse,peak_day_model,peak_day_actual,peak_offset\n";
    for (const auto& r : rows) {
        out << r.region_id << ',' << fmt(r.mape_pct, 6) << ',' << fmt(r.rmse, 6) << ',' << r.peak_day_model
            << ',' << r.peak_day_actual << ',' << r.peak_offset << '\n';
    }
}

std::vector<des::Order> read_orders_csv(const std::string& path)
{
    const csv::Table table =
        csv::read_file(path, "order_id,class,origin,destination,qty,placed_at,fulfilled_at,mode");
    std::vector<des::Order> orders;
    orders.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        des::Order o;
        o.order_id = static_cast<std::uint64_t>(csv::to_int(table, r, 0));
        const std::string& klass = table.rows[r][1];
        if (klass == "customer") {
            o.klass = des::OrderClass::customer;
        } else if (klass == "distributor_replenishment") {
            o.klass = des::OrderClass::distributor_replenishment;
        } else if (klass == "assembly_parts") {
            o.klass = des::OrderClass::assembly_parts;
        } else {
            throw DataError(path + ": unknown order class '" + klass + "'");
        }
        o.origin = table.rows[r][2];
        o.destination = table.rows[r][3];
        o.qty = csv::to_int(table, r, 4);
        o.placed_at = csv::to_double(table, r, 5);
        o.fulfilled_at = table.rows[r][6] == "open" ? -1.0 : csv::to_double(table, r, 6);
        o.mode = table.rows[r][7] == "air" ? net::TransportMode::air : net::TransportMode::ground;
        orders.push_back(std::move(o));
    }
    return orders;
}

namespace
{

scenario::ClassStats recompute_class_stats(const std::vector<des::Order>& orders, des::OrderClass klass)
{
    scenario::ClassStats stats;
    std::vector<double> durations;
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
        stats.median_days = scenario::percentile(durations, 50.0);
        stats.p90_days = scenario::percentile(durations, 90.0);
    }
    return stats;
}

} // namespace

scenario::MetricsReport read_cell_report(const std::string& cell_dir)
{
    const csv::Table meta = csv::read_file(
        cell_dir + "/meta.csv", "demand_scenario,inventory_strategy,transport_strategy,horizon_days,replications,seed");
    if (meta.rows.size() != 1) {
        throw DataError(cell_dir + "/meta.csv: expected exactly one row");
    }

    scenario::MetricsReport report;
    report.demand_label = meta.rows[0][0];
    report.inventory_label = meta.rows[0][1];
    report.transport_label = meta.rows[0][2];
    report.horizon_days = static_cast<int>(csv::to_int(meta, 0, 3));
    report.replications = static_cast<int>(csv::to_int(meta, 0, 4));
    report.seed = static_cast<std::uint64_t>(csv::to_int(meta, 0, 5));

    report.orders = read_orders_csv(cell_dir + "/orders.csv");
    report.customer = recompute_class_stats(report.orders, des::OrderClass::customer);
    report.replenishment = recompute_class_stats(report.orders, des::OrderClass::distributor_replenishment);

    long long replenishment_qty = 0;
    for (const des::Order& o : report.orders) {
        if (o.klass == des::OrderClass::distributor_replenishment) {
            replenishment_qty += o.qty;
        }
    }
    report.mean_daily_manufacturer_demand = static_cast<double>(replenishment_qty) /
                                            static_cast<double>(report.horizon_days) /
                                            static_cast<double>(report.replications);
    return report;
}

} // namespace ocsim::io
