#include "ocsim/io.hpp"

#include "ocsim/csv.hpp"
#include "ocsim/errors.hpp"
#include "ocsim/network.hpp"
#include "ocsim/scenario.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ocsim;

namespace
{

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_CASE("an empty config yields the documented defaults")
{
    const auto cfg = io::parse_config_text("");
    CHECK(cfg.epi_params.illness_duration_days == 15);
    CHECK(cfg.epi_params.hospitalization_rate == 0.01);
    CHECK(cfg.epi_params.los_min_days == 8);
    CHECK(cfg.epi_params.los_max_days == 15);
    CHECK(cfg.epi_params.immunity_duration_days == 30);
    CHECK(cfg.workforce_share == 0.5);
    CHECK(cfg.oc_rates.inventory_rate == 0.10);
    CHECK(cfg.oc_rates.scrap_rate == 0.01);
    CHECK(cfg.oc_rates.units_per_bed == 0.1);
    CHECK(cfg.oc_rates.precovid_hospital_demand_national == 171.0);
    CHECK(cfg.oc_rates.precovid_home_demand_national == 545.0);
    CHECK(cfg.oc_rates.hospital_covid_usage == 0.065);
    CHECK(cfg.oc_rates.discharge_usage == 0.01);
    CHECK(cfg.oc_rates.overflow_discharge_usage == 0.02);
    CHECK(cfg.horizon_days == 121); // late November through late March
    CHECK(cfg.start_date == "2020-11-20");
    CHECK(cfg.engine.transit.ground_speed_mpd == 500.0);
    CHECK(cfg.engine.transit.air_speed_mpd == 3000.0);
    CHECK(cfg.engine.transit.air_cutoff_miles == 500.0);
    CHECK(cfg.sizing.service_level == 0.95);
}

TEST_CASE("config keys can be set in sections or fully dotted")
{
    const auto sectioned = io::parse_config_text("[oc]\ninventory_rate = 0.15\n");
    CHECK(sectioned.oc_rates.inventory_rate == 0.15);

    const auto dotted = io::parse_config_text("oc.inventory_rate = 0.15\n");
    CHECK(dotted.oc_rates.inventory_rate == 0.15);

    const auto spaced = io::parse_config_text("# comment\n\n[run]\nseed = 7\nhorizon = 33\n");
    CHECK(spaced.seed == 7);
    CHECK(spaced.spec.horizon_days == 33);
}

TEST_CASE("unknown config keys are hard errors naming the key")
{
    CHECK_THROWS_WITH_AS(io::parse_config_text("ilness_duration = 15\n"),
                         doctest::Contains("ilness_duration"), ConfigError);
    CHECK_THROWS_WITH_AS(io::parse_config_text("[epi]\nilness_duration = 15\n"),
                         doctest::Contains("epi.ilness_duration"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text("epi.illness_duration = abc\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_config_text("no_equals_sign\n"), ConfigError);
}

TEST_CASE("region ingestion")
{
    SUBCASE("the bundled ten-state file")
    {
        const auto regions = io::ingest_regions("data/regions.csv", 0.5);
        REQUIRE(regions.size() == 10);
        bool saw_az = false;
        for (const auto& r : regions) {
            if (r.region_id == "AZ") {
                CHECK(r.population == 7278717);
                CHECK(r.hospital_capacity == 14000);
                saw_az = true;
            }
        }
        CHECK(saw_az);
    }
    SUBCASE("negative population is a row-level error")
    {
        const std::string path = "/tmp/ocsim_bad_regions.csv";
        {
            std::ofstream out(path);
            out << "region_id,population,hospital_capacity,initial_infected\nXX,-5,10,0\n";
        }
        CHECK_THROWS_AS(io::ingest_regions(path, 0.5), DataError);
        std::remove(path.c_str());
    }
    SUBCASE("wrong header rejected")
    {
        const std::string path = "/tmp/ocsim_bad_header.csv";
        {
            std::ofstream out(path);
            out << "region,population\nXX,5\n";
        }
        CHECK_THROWS_AS(io::ingest_regions(path, 0.5), DataError);
        std::remove(path.c_str());
    }
}

TEST_CASE("contact ingestion demands contiguous days")
{
    const auto schedules = io::ingest_contacts("data/contacts.csv");
    REQUIRE(schedules.size() == 10);
    for (const auto& [region, sched] : schedules) {
        CAPTURE(region);
        REQUIRE(sched.size() == 200);
    }

    const std::string path = "/tmp/ocsim_bad_contacts.csv";
    {
        std::ofstream out(path);
        out << "region_id,day,contacts\nXX,0,1.5\nXX,2,1.5\n";
    }
    CHECK_THROWS_AS(io::ingest_contacts(path), DataError);
    std::remove(path.c_str());
}

TEST_CASE("fit metrics against reported cases")
{
    SUBCASE("identical series fit perfectly")
    {
        std::map<std::string, std::vector<double>> series = {{"AA", {10, 20, 30, 20, 10}}};
        const auto rows = io::validate_against_actuals(series, series);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].mape_pct == doctest::Approx(0.0));
        CHECK(rows[0].rmse == doctest::Approx(0.0));
        CHECK(rows[0].peak_offset == 0);
    }
    SUBCASE("a ten percent inflation gives ten percent error")
    {
        std::map<std::string, std::vector<double>> actual = {{"AA", {100, 200, 300}}};
        std::map<std::string, std::vector<double>> model = {{"AA", {110, 220, 330}}};
        const auto rows = io::validate_against_actuals(model, actual);
        CHECK(rows[0].mape_pct == doctest::Approx(10.0).epsilon(1e-9));
    }
    SUBCASE("constant offset gives its own root-mean-square")
    {
        std::map<std::string, std::vector<double>> actual = {{"AA", std::vector<double>(30, 100.0)}};
        std::map<std::string, std::vector<double>> model = {{"AA", std::vector<double>(30, 90.0)}};
        const auto rows = io::validate_against_actuals(model, actual);
        CHECK(rows[0].rmse == doctest::Approx(10.0));
        CHECK(rows[0].mape_pct == doctest::Approx(10.0));
    }
    SUBCASE("peak offset is the difference of argmax days")
    {
        std::map<std::string, std::vector<double>> actual = {{"AA", {1, 5, 9, 5, 1}}};
        std::map<std::string, std::vector<double>> model = {{"AA", {1, 2, 5, 9, 5}}};
        const auto rows = io::validate_against_actuals(model, actual);
        CHECK(rows[0].peak_day_model == 3);
        CHECK(rows[0].peak_day_actual == 2);
        CHECK(rows[0].peak_offset == 1);
    }
    SUBCASE("missing region is an error")
    {
        std::map<std::string, std::vector<double>> model = {{"AA", {1.0}}};
        std::map<std::string, std::vector<double>> actual = {{"BB", {1.0}}};
        CHECK_THROWS_AS(io::validate_against_actuals(model, actual), DataError);
    }
}

TEST_CASE("emitted outputs are complete, stable, and re-ingestable")
{
    const auto network = net::load_network("data/nodes.csv", "data/bom.csv");
    scenario::SimInputs inputs;
    inputs.regions = io::ingest_regions("data/regions.csv", 0.5);
    inputs.contact_schedules = io::ingest_contacts("data/contacts.csv");
    inputs.engine.lead_time_cv = 0.1;

    scenario::ScenarioSpec spec;
    spec.demand = scenario::DemandScenario::pre_covid;
    spec.horizon_days = 15;
    spec.seed = 99;

    const auto report = scenario::run_scenario(spec, network, inputs);

    const std::string dir_a = "/tmp/ocsim_emit_a";
    const std::string dir_b = "/tmp/ocsim_emit_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    io::emit_run_outputs(report, dir_a);
    io::emit_run_outputs(scenario::run_scenario(spec, network, inputs), dir_b);

    for (const char* name : {"signals.csv", "orders.csv", "inventory.csv", "report.csv", "meta.csv",
                             "timeseries/epidemic.csv", "timeseries/oc_orders.csv",
                             "timeseries/oc_availability.csv", "timeseries/manufacturer_demand.csv",
                             "timeseries/backlog.csv", "timeseries/utilization.csv"}) {
        CAPTURE(name);
        const std::string a = slurp(dir_a + "/" + std::string(name));
        REQUIRE(!a.empty());
        // identical config and seed reproduce every emitted byte
        REQUIRE(a == slurp(dir_b + "/" + std::string(name)));
    }

    // signals.csv rows are ordered by region then day
    {
        const auto table = csv::read_file(dir_a + "/signals.csv",
                                          "region_id,day,hospital_order_qty,home_order_qty,covid_patients,"
                                          "oc_in_use,oc_on_hand,oc_scrapped_today");
        REQUIRE(table.rows.size() == 10 * 15);
        for (std::size_t i = 1; i < table.rows.size(); ++i) {
            const bool same_region = table.rows[i][0] == table.rows[i - 1][0];
            if (same_region) {
                REQUIRE(std::stoi(table.rows[i][1]) == std::stoi(table.rows[i - 1][1]) + 1);
            }
        }
    }

    // orders.csv round-trips through the reader
    const auto orders = io::read_orders_csv(dir_a + "/orders.csv");
    REQUIRE(orders.size() == report.orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
        REQUIRE(orders[i].order_id == report.orders[i].order_id);
        REQUIRE(orders[i].klass == report.orders[i].klass);
        REQUIRE(orders[i].qty == report.orders[i].qty);
        REQUIRE(orders[i].open() == report.orders[i].open());
    }

    // the cell report reader recovers the labels and statistics
    const auto rebuilt = io::read_cell_report(dir_a);
    CHECK(rebuilt.demand_label == "pre_covid");
    CHECK(rebuilt.customer.completed == report.customer.completed);
    CHECK(rebuilt.customer.p90_days == doctest::Approx(report.customer.p90_days).epsilon(1e-4));

    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST_CASE("the sweep report has one row per cell")
{
    std::vector<scenario::MetricsReport> reports;
    for (const char* demand : {"pre_covid", "baseline", "increased_contact", "increased_usage"}) {
        for (const char* strategy : {"static", "dynamic", "dynamic"}) {
            scenario::MetricsReport r;
            r.demand_label = demand;
            r.inventory_label = strategy;
            r.transport_label = "ground_only";
            reports.push_back(std::move(r));
        }
    }
    const std::string path = "/tmp/ocsim_report12.csv";
    io::write_report_csv(reports, path);
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        ++lines;
    }
    CHECK(lines == 13); // header plus twelve cells
    std::remove(path.c_str());
}
