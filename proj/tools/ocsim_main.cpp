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
#include "ocsim/csv.hpp"
#include "ocsim/errors.hpp"
#include "ocsim/io.hpp"
#include "ocsim/network.hpp"
#include "ocsim/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

struct World {
    ocsim::net::Network network;
    ocsim::scenario::SimInputs inputs;
};

World load_world(const ocsim::io::RunConfig& cfg)
{
    World world;
    world.network = ocsim::net::load_network(cfg.nodes_csv, cfg.bom_csv);
    world.inputs.regions = ocsim::io::ingest_regions(cfg.regions_csv, cfg.workforce_share);
    world.inputs.contact_schedules = ocsim::io::ingest_contacts(cfg.contacts_csv);
    world.inputs.base_epi = cfg.epi_params;
    world.inputs.base_rates = cfg.oc_rates;
    world.inputs.engine = cfg.engine;
    world.inputs.sizing = cfg.sizing;
    return world;
}

void apply_overrides(ocsim::io::RunConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::optional<std::string>& out, const std::optional<int>& replications)
{
    if (seed) {
        cfg.seed = *seed;
        cfg.spec.seed = *seed;
    }
    if (out) {
        cfg.out_dir = *out;
    }
    if (replications) {
        cfg.replications = *replications;
        cfg.spec.replications = *replications;
    }
}

void print_report_line(const ocsim::scenario::MetricsReport& r)
{
    std::printf("%-16s %-8s %-13s customer median/p90 %7.3f/%8.3f d (open %lld)  "
                "replenishment median/p90 %7.3f/%8.3f d (open %lld)  demand %8.2f/day\n",
                r.demand_label.c_str(), r.inventory_label.c_str(), r.transport_label.c_str(),
                r.customer.median_days, r.customer.p90_days, static_cast<long long>(r.customer.open),
                r.replenishment.median_days, r.replenishment.p90_days,
                static_cast<long long>(r.replenishment.open), r.mean_daily_manufacturer_demand);
}

int cmd_run(const std::string& config_path, const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& out, const std::optional<int>& replications)
{
    ocsim::io::RunConfig cfg = ocsim::io::parse_config(config_path);
    apply_overrides(cfg, seed, out, replications);
    const World world = load_world(cfg);

    const ocsim::scenario::MetricsReport report =
        ocsim::scenario::run_scenario(cfg.spec, world.network, world.inputs);
    ocsim::io::emit_run_outputs(report, cfg.out_dir);
    print_report_line(report);
    std::printf("outputs written to %s (%llu events)\n", cfg.out_dir.c_str(),
                static_cast<unsigned long long>(report.event_count));
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& grid_path,
              const std::optional<std::uint64_t>& seed, const std::optional<std::string>& out,
              const std::optional<int>& replications)
{
    ocsim::io::RunConfig cfg = ocsim::io::parse_config(config_path);
    apply_overrides(cfg, seed, out, replications);
    const World world = load_world(cfg);

    const ocsim::csv::Table grid = ocsim::csv::read_file(grid_path, "demand,inventory,transport");
    std::vector<ocsim::scenario::MetricsReport> reports;
    for (std::size_t r = 0; r < grid.rows.size(); ++r) {
        ocsim::scenario::ScenarioSpec spec = cfg.spec;
        spec.demand = ocsim::scenario::parse_demand_scenario(grid.rows[r][0]);
        spec.inventory = ocsim::scenario::parse_inventory_mode(grid.rows[r][1]);
        spec.transport = ocsim::scenario::parse_transport_strategy(grid.rows[r][2]);

        ocsim::scenario::MetricsReport report = ocsim::scenario::run_scenario(spec, world.network, world.inputs);
        const std::string cell_dir = cfg.out_dir + "/" + report.demand_label + "__" + report.inventory_label +
                                     "__" + report.transport_label;
        ocsim::io::emit_run_outputs(report, cell_dir);
        print_report_line(report);
        reports.push_back(std::move(report));
    }
    ocsim::io::ensure_dir(cfg.out_dir);
    ocsim::io::write_report_csv(reports, cfg.out_dir + "/report.csv");
    std::printf("sweep report written to %s/report.csv (%zu cells)\n", cfg.out_dir.c_str(), reports.size());
    return 0;
}

int cmd_validate(const std::string& config_path, const std::string& actuals_path,
                 const std::optional<std::uint64_t>& seed, const std::optional<std::string>& out)
{
    ocsim::io::RunConfig cfg = ocsim::io::parse_config(config_path);
    apply_overrides(cfg, seed, out, std::nullopt);
    if (cfg.spec.demand == ocsim::scenario::DemandScenario::pre_covid) {
        throw ocsim::ConfigError("validate: the pre_covid scenario has no epidemic to compare");
    }
    const World world = load_world(cfg);

    std::vector<ocsim::epi::EpiDailyOutput> series;
    ocsim::scenario::generate_signals(cfg.spec, world.inputs, cfg.spec.seed, &series);

    std::map<std::string, std::vector<double>> model;
    for (const auto& day : series) {
        model[day.region_id].push_back(static_cast<double>(day.infectious_count));
    }
    const auto actual = ocsim::io::ingest_actual_cases(actuals_path);
    const auto rows = ocsim::io::validate_against_actuals(model, actual);

    ocsim::io::ensure_dir(cfg.out_dir);
    ocsim::io::write_validation_csv(rows, cfg.out_dir + "/validation.csv");
    std::printf("%-8s %12s %12s %6s %6s %6s\n", "region", "mape_pct", "rmse", "peakM", "peakA", "offset");
    for (const auto& row : rows) {
        std::printf("%-8s %12.4f %12.2f %6d %6d %6d\n", row.region_id.c_str(), row.mape_pct, row.rmse,
                    row.peak_day_model, row.peak_day_actual, row.peak_offset);
    }
    std::printf("validation written to %s/validation.csv\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_report(const std::string& out_dir)
{
    std::vector<std::string> cells;
    for (const auto& entry : std::filesystem::directory_iterator(out_dir)) {
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "meta.csv")) {
            cells.push_back(entry.path().string());
        }
    }
    if (cells.empty()) {
        throw ocsim::DataError("no run directories with meta.csv under '" + out_dir + "'");
    }
    std::sort(cells.begin(), cells.end());

    std::vector<ocsim::scenario::MetricsReport> reports;
    for (const std::string& cell : cells) {
        reports.push_back(ocsim::io::read_cell_report(cell));
        print_report_line(reports.back());
    }
    ocsim::io::write_report_csv(reports, out_dir + "/report.csv");
    std::printf("report regenerated at %s/report.csv (%zu cells)\n", out_dir.c_str(), reports.size());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coupled epidemic and oxygen-concentrator supply chain simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string grid_path;
    std::string actuals_path;
    std::string report_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> replications;

    auto* run_cmd = app.add_subcommand("run", "Run one scenario and emit its outputs");
    run_cmd->add_option("config", config_path, "config file")->required();
    run_cmd->add_option("--seed", seed, "override the run seed");
    run_cmd->add_option("--out", out, "override the output directory");
    run_cmd->add_option("--replications", replications, "override the replication count");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run every cell of a scenario grid");
    sweep_cmd->add_option("config", config_path, "config file")->required();
    sweep_cmd->add_option("--grid", grid_path, "grid csv: demand,inventory,transport")->required();
    sweep_cmd->add_option("--seed", seed, "override the run seed");
    sweep_cmd->add_option("--out", out, "override the output directory");
    sweep_cmd->add_option("--replications", replications, "override the replication count");

    auto* validate_cmd = app.add_subcommand("validate", "Compare the modeled epidemic against reported cases");
    validate_cmd->add_option("config", config_path, "config file")->required();
    validate_cmd->add_option("--actuals", actuals_path, "reported case csv")->required();
    validate_cmd->add_option("--seed", seed, "override the run seed");
    validate_cmd->add_option("--out", out, "override the output directory");

    auto* report_cmd = app.add_subcommand("report", "Rebuild report.csv from emitted run directories");
    report_cmd->add_option("out_dir", report_dir, "directory holding run outputs")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return cmd_run(config_path, seed, out, replications);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(config_path, grid_path, seed, out, replications);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(config_path, actuals_path, seed, out);
        }
        if (report_cmd->parsed()) {
            return cmd_report(report_dir);
        }
    } catch (const ocsim::ConfigError& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return 2;
    } catch (const ocsim::DataError& err) {
        std::cerr << "data error: " << err.what() << '\n';
        return 3;
    } catch (const ocsim::InvariantError& err) {
        std::cerr << "invariant breach: " << err.what() << '\n';
        return 4;
    }
    return 1;
}
