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
#ifndef OCSIM_IO_HPP
#define OCSIM_IO_HPP

#include "ocsim/epi.hpp"
#include "ocsim/network.hpp"
#include "ocsim/scenario.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace ocsim::io
{

/// Full run configuration. Defaults are the baseline parameter set; every
/// value can be overridden from the config file.
struct RunConfig {
    // [paths]
    std::string nodes_csv = "data/nodes.csv";
    std::string bom_csv = "data/bom.csv";
    std::string regions_csv = "data/regions.csv";
    std::string contacts_csv = "data/contacts.csv";
    std::string actuals_csv;

    // [run]
    std::uint64_t seed = 42;
    int horizon_days = 121; ///< default simulation window (late Nov through late Mar)
    int replications = 1;
    std::string out_dir = "out";
    std::string start_date = "2020-11-20";

    // [scenario]
    scenario::ScenarioSpec spec;

    // [epi]
    epi::EpiParameters epi_params; ///< contact schedule comes from the CSV
    double workforce_share = 0.5;

    // [oc]
    demand::OcUsageRates oc_rates;

    // [transport] + [policy] + [des]
    des::EngineConfig engine;
    scenario::PolicySizing sizing;
};

/// Parses the `key = value` config grammar. Sections `[name]` prefix the keys
/// that follow; fully dotted keys (`oc.inventory_rate = 0.15`) work anywhere.
/// Unknown keys are hard errors naming the key.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& label = "<config>");

/// Reads `region_id,population,hospital_capacity,initial_infected` rows.
std::vector<epi::RegionProfile> ingest_regions(const std::string& csv_path, double workforce_share);

/// Reads `region_id,day,contacts` rows into per-region schedules. Days must be
/// contiguous from zero for each region.
std::unordered_map<std::string, std::vector<double>> ingest_contacts(const std::string& csv_path);

/// Reads `region_id,day,active_cases` rows.
std::map<std::string, std::vector<double>> ingest_actual_cases(const std::string& csv_path);

struct FitRow {
    std::string region_id;
    double mape_pct = 0.0; ///< mean absolute percentage error over days with actual > 0
    double rmse = 0.0;
    int peak_day_model = 0;
    int peak_day_actual = 0;
    int peak_offset = 0;
};

/// Comparison-only fit metrics between a modeled infectious series and the
/// reported case series, per region. No fitting is performed.
std::vector<FitRow> validate_against_actuals(const std::map<std::string, std::vector<double>>& model,
                                             const std::map<std::string, std::vector<double>>& actual);

/// Writes signals.csv, orders.csv, inventory.csv, report.csv and the
/// timeseries/ family with fixed headers and stable row ordering.
void emit_run_outputs(const scenario::MetricsReport& report, const std::string& out_dir);

/// Table-shaped summary, one row per (scenario, strategy) cell.
void write_report_csv(const std::vector<scenario::MetricsReport>& reports, const std::string& path);

void write_validation_csv(const std::vector<FitRow>& rows, const std::string& path);

/// Re-reads a cell's orders.csv (round-trip of the emitted schema).
std::vector<des::Order> read_orders_csv(const std::string& path);

/// Rebuilds a skeleton report (labels, meta, order stats) from an emitted cell
/// directory containing meta.csv and orders.csv.
scenario::MetricsReport read_cell_report(const std::string& cell_dir);

/// Creates the directory (and parents) if missing.
void ensure_dir(const std::string& path);

} // namespace ocsim::io

#endif
