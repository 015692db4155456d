// Acceptance suite: runs every top-level check on the bundled instance and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include "ocsim/des.hpp"
#include "ocsim/epi.hpp"
#include "ocsim/errors.hpp"
#include "ocsim/io.hpp"
#include "ocsim/network.hpp"
#include "ocsim/oc_demand.hpp"
#include "ocsim/rng.hpp"
#include "ocsim/scenario.hpp"
#include "ocsim/stats.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace ocsim;

namespace
{

struct Criterion {
    int number;
    std::string title;
    std::function<bool(std::string&)> check;
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return {};
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// ---- shared fixtures -------------------------------------------------------

scenario::SimInputs bundled_inputs()
{
    scenario::SimInputs inputs;
    inputs.regions = io::ingest_regions("data/regions.csv", 0.5);
    inputs.contact_schedules = io::ingest_contacts("data/contacts.csv");
    inputs.engine.lead_time_cv = 0.1;
    inputs.sizing.sigma_d_cv = 0.8;
    return inputs;
}

scenario::ScenarioSpec bundled_spec(scenario::DemandScenario demand, des::InventoryMode inventory,
                                    des::TransportStrategy transport)
{
    scenario::ScenarioSpec spec;
    spec.demand = demand;
    spec.inventory = inventory;
    spec.transport = transport;
    spec.horizon_days = 150;
    spec.seed = 42;
    return spec;
}

// The full experiment matrix, computed once and shared by criteria 7 and 8.
const std::map<std::string, scenario::MetricsReport>& matrix_reports(double& elapsed_seconds)
{
    static std::map<std::string, scenario::MetricsReport> reports;
    static double elapsed = 0.0;
    if (reports.empty()) {
        const auto start = std::chrono::steady_clock::now();
        const auto network = net::load_network("data/nodes.csv", "data/bom.csv");
        const auto inputs = bundled_inputs();
        const std::vector<scenario::DemandScenario> demands = {
            scenario::DemandScenario::pre_covid, scenario::DemandScenario::baseline,
            scenario::DemandScenario::increased_contact, scenario::DemandScenario::increased_usage};
        const std::vector<std::pair<des::InventoryMode, des::TransportStrategy>> strategies = {
            {des::InventoryMode::static_policy, des::TransportStrategy::ground_only},
            {des::InventoryMode::dynamic_policy, des::TransportStrategy::ground_only},
            {des::InventoryMode::dynamic_policy, des::TransportStrategy::air_over_500},
        };
        for (const auto demand : demands) {
            for (const auto& [inv, mode] : strategies) {
                const auto spec = bundled_spec(demand, inv, mode);
                auto report = scenario::run_scenario(spec, network, inputs);
                const std::string key = report.demand_label + "/" + report.inventory_label + "/" +
                                        report.transport_label;
                reports.emplace(key, std::move(report));
            }
        }
        elapsed = seconds_since(start);
    }
    elapsed_seconds = elapsed;
    return reports;
}

// ---- criteria --------------------------------------------------------------

bool conservation_suite(std::string& detail)
{
    const auto start = std::chrono::steady_clock::now();
    rng::Stream gen(900913, rng::kStreamGeneric);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto cfg = support::random_epi_config(gen, 400);
        auto state = epi::init_region(cfg.profile, cfg.params);
        long long last_deceased = 0;
        for (int day = 0; day < cfg.horizon; ++day) {
            epi::step_day(state, cfg.profile, cfg.params, 7000 + static_cast<std::uint64_t>(trial));
            if (state.stock_sum() != cfg.profile.population) {
                detail = "conservation broken in trial " + std::to_string(trial);
                return false;
            }
            if (state.susceptible < 0 || state.infectious < 0 || state.hospitalized < 0 ||
                state.deceased < 0 || state.recovered < 0) {
                detail = "negative stock in trial " + std::to_string(trial);
                return false;
            }
            if (state.deceased < last_deceased) {
                detail = "deceased decreased in trial " + std::to_string(trial);
                return false;
            }
            last_deceased = state.deceased;
        }
    }
    const double elapsed = seconds_since(start);
    detail = "1000 randomized runs in " + std::to_string(elapsed) + " s";
    return elapsed < 60.0;
}

bool reinfection_timing(std::string& detail)
{
    epi::EpiParameters params;
    params.contact_schedule.assign(180, 1.9);
    epi::RegionProfile profile;
    profile.region_id = "AZ";
    profile.population = 7278717;
    profile.initial_infected = 30000;
    profile.hospital_capacity = 14000;

    auto state = epi::init_region(profile, params);
    std::map<int, long long> created; // recovery cohorts by creation day
    long long checked = 0;
    for (int day = 0; day < 180; ++day) {
        const auto out = epi::step_day(state, profile, params, 42);
        for (const auto& cohort : state.recovery_cohorts) {
            if (cohort.day == day) {
                created[day] += cohort.count;
            }
        }
        const long long expected =
            day >= params.immunity_duration_days ? created[day - params.immunity_duration_days] : 0;
        if (out.returns_to_susceptible != expected) {
            detail = "day " + std::to_string(day) + ": returns " +
                     std::to_string(out.returns_to_susceptible) + " != cohort " + std::to_string(expected);
            return false;
        }
        ++checked;
    }
    detail = std::to_string(checked) + " days checked, every return exactly 30 days after recovery";
    return true;
}

bool contact_monotonicity(std::string& detail)
{
    rng::Stream gen(1371, rng::kStreamGeneric);
    for (int trial = 0; trial < 100; ++trial) {
        auto cfg = support::random_epi_config(gen, 200);
        const std::uint64_t seed = 500 + static_cast<std::uint64_t>(trial);

        auto cumulative = [&](const epi::EpiParameters& params) {
            long long total = 0;
            for (const auto& day : epi::run_epidemic(cfg.profile, params, cfg.horizon, seed)) {
                total += day.new_infections;
            }
            return total;
        };

        const long long base = cumulative(cfg.params);
        epi::EpiParameters scaled = cfg.params;
        for (double& c : scaled.contact_schedule) {
            c *= 1.001;
        }
        const long long lifted = cumulative(scaled);
        if (lifted < base) {
            detail = "trial " + std::to_string(trial) + ": " + std::to_string(lifted) + " < " +
                     std::to_string(base);
            return false;
        }
    }
    detail = "100 random configurations, cumulative infections never decreased";
    return true;
}

bool qr_oracle_equivalence(std::string& detail)
{
    const auto network = support::toy_network();
    const double lead = support::toy_distributor_lead(network, net::TransitParams{});

    des::PolicyInputs pi;
    pi.mu_d = 69.5 / 7.0;
    pi.cycle_days = 7.0;
    pi.mu_lt = 24.5 / pi.mu_d;
    pi.alpha = 0.95;
    const auto qr = des::qr_parameters(pi);

    const int horizon = 1000;
    std::vector<long long> demand(horizon);
    rng::Stream gen(777, rng::kStreamGeneric);
    for (auto& d : demand) {
        d = gen.uniform_int(0, 6);
    }

    des::PolicyPlan plan;
    plan.inputs.emplace("D1", pi);
    plan.initial_on_hand.emplace("D1", qr.q + qr.r);
    plan.initial_on_hand.emplace("ASM", 1000000000);
    des::EngineConfig cfg;
    cfg.lead_time_cv = 0.0;

    const auto run = des::run(network, cfg, plan, {"T1"}, {1.0}, support::toy_signals(demand), horizon, 1);
    std::vector<des::Order> engine_orders;
    for (const auto& o : run.orders) {
        if (o.klass == des::OrderClass::distributor_replenishment) {
            engine_orders.push_back(o);
        }
    }

    const auto replay = oracle::replay_qr(demand, qr.q + qr.r, qr.q, qr.r, lead);
    if (engine_orders.size() != replay.replenishments.size()) {
        detail = "order count " + std::to_string(engine_orders.size()) + " != oracle " +
                 std::to_string(replay.replenishments.size());
        return false;
    }
    long long mismatches = 0;
    for (std::size_t i = 0; i < engine_orders.size(); ++i) {
        if (engine_orders[i].placed_at != replay.replenishments[i].placed_at ||
            engine_orders[i].qty != replay.replenishments[i].qty) {
            ++mismatches;
        }
    }
    detail = std::to_string(engine_orders.size()) + " replenishment orders compared, " +
             std::to_string(mismatches) + " mismatches";
    return mismatches == 0 && !engine_orders.empty();
}

bool qr_numeric_check(std::string& detail)
{
    des::PolicyInputs pi;
    pi.mu_d = 10.0;
    pi.sigma_d = 3.0;
    pi.cycle_days = 7.0;
    pi.mu_lt = 2.0;
    pi.sigma_lt = 0.5;
    pi.alpha = 0.95;
    const auto qr = des::qr_parameters(pi);
    const double z_oracle = oracle::normal_quantile(0.95);
    const double z_impl = stats::normal_quantile(0.95);
    detail = "Q=" + std::to_string(qr.q) + " R=" + std::to_string(qr.r) +
             " z=" + std::to_string(z_impl);
    return qr.q == 70 && qr.r == 31 && std::abs(z_impl - 1.64485) < 1e-3 &&
           std::abs(z_impl - z_oracle) < 1e-6;
}

bool precovid_baseline(std::string& detail)
{
    const auto inputs = bundled_inputs();
    scenario::ScenarioSpec spec;
    spec.demand = scenario::DemandScenario::pre_covid;
    spec.horizon_days = 120;
    spec.seed = 42;
    const auto signals = scenario::generate_signals(spec, inputs, spec.seed);

    double total = 0.0;
    for (const auto& [region, days] : signals) {
        for (const auto& day : days) {
            total += static_cast<double>(day.signal.hospital_order_qty + day.signal.home_order_qty);
        }
    }
    const double mean_daily = total / 120.0;
    detail = "national demand " + std::to_string(mean_daily) + "/day vs 716 expected";
    return std::abs(mean_daily - 716.0) <= 0.05 * 716.0;
}

bool demand_ordering(std::string& detail)
{
    double elapsed = 0.0;
    const auto& reports = matrix_reports(elapsed);

    auto pooled_mean = [&](const std::string& demand) {
        double total = 0.0;
        int n = 0;
        for (const auto& [key, report] : reports) {
            if (key.rfind(demand + "/", 0) == 0) {
                total += report.mean_daily_manufacturer_demand;
                ++n;
            }
        }
        return total / n;
    };

    const double pre = pooled_mean("pre_covid");
    const double base = pooled_mean("baseline");
    const double contact = pooled_mean("increased_contact");
    const double usage = pooled_mean("increased_usage");
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.1f < %.1f < %.1f < %.1f", pre, base, contact, usage);
    detail = buf;
    return pre < base && base < contact && contact < usage;
}

bool mitigation_trends(std::string& detail)
{
    double elapsed = 0.0;
    const auto& reports = matrix_reports(elapsed);
    const auto& get = [&](const std::string& key) -> const scenario::MetricsReport& {
        return reports.at(key);
    };

    const bool a = get("increased_contact/dynamic/ground_only").customer.p90_days <=
                   get("increased_contact/static/ground_only").customer.p90_days;
    const bool b1 = get("pre_covid/dynamic/air_over_500").replenishment.p90_days <
                    get("pre_covid/static/ground_only").replenishment.p90_days;
    const bool b2 = get("baseline/dynamic/air_over_500").replenishment.p90_days <
                    get("baseline/static/ground_only").replenishment.p90_days;
    const double usage_p90 = get("increased_usage/static/ground_only").customer.p90_days;
    const double base_p90 = get("baseline/static/ground_only").customer.p90_days;
    const bool c = usage_p90 >= 10.0 * base_p90 && usage_p90 > base_p90;
    const bool within_budget = elapsed < 300.0;

    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "(a)%s dyn %.2f<=stat %.2f; (b)%s air %.2f/%.2f < ground %.2f/%.2f; (c)%s usage %.2f vs "
                  "base %.2f; matrix %.0f s",
                  a ? "ok" : "FAIL", get("increased_contact/dynamic/ground_only").customer.p90_days,
                  get("increased_contact/static/ground_only").customer.p90_days, (b1 && b2) ? "ok" : "FAIL",
                  get("pre_covid/dynamic/air_over_500").replenishment.p90_days,
                  get("baseline/dynamic/air_over_500").replenishment.p90_days,
                  get("pre_covid/static/ground_only").replenishment.p90_days,
                  get("baseline/static/ground_only").replenishment.p90_days, c ? "ok" : "FAIL", usage_p90,
                  base_p90, elapsed);
    detail = buf;
    return a && b1 && b2 && c && within_budget;
}

bool determinism_golden(std::string& detail)
{
    const auto network = net::load_network("data/nodes.csv", "data/bom.csv");
    const auto inputs = bundled_inputs();
    const auto spec = bundled_spec(scenario::DemandScenario::baseline, des::InventoryMode::static_policy,
                                   des::TransportStrategy::ground_only);

    const std::string dir_a = "/tmp/ocsim_accept_a";
    const std::string dir_b = "/tmp/ocsim_accept_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    io::emit_run_outputs(scenario::run_scenario(spec, network, inputs), dir_a);
    io::emit_run_outputs(scenario::run_scenario(spec, network, inputs), dir_b);

    for (const char* name : {"signals.csv", "orders.csv", "inventory.csv", "report.csv",
                             "timeseries/epidemic.csv", "timeseries/manufacturer_demand.csv"}) {
        const std::string a = slurp(dir_a + "/" + std::string(name));
        if (a.empty() || a != slurp(dir_b + "/" + std::string(name))) {
            detail = std::string("mismatch or missing: ") + name;
            return false;
        }
    }

    const std::string golden = slurp("tests/golden/report_golden.csv");
    const std::string fresh = slurp(dir_a + "/report.csv");
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    if (golden.empty()) {
        detail = "tests/golden/report_golden.csv missing";
        return false;
    }
    if (golden != fresh) {
        detail = "report.csv deviates from the committed golden file";
        return false;
    }
    detail = "two runs byte-identical; report matches the golden file";
    return true;
}

bool inventory_audit(std::string& detail)
{
    const auto network = net::load_network("data/nodes.csv", "data/bom.csv");
    auto inputs = bundled_inputs();
    inputs.engine.split_unit_orders = true; // one event cascade per unit
    inputs.engine.audit = true;

    const auto spec = bundled_spec(scenario::DemandScenario::baseline, des::InventoryMode::static_policy,
                                   des::TransportStrategy::ground_only);
    try {
        const auto report = scenario::run_scenario(spec, network, inputs);
        detail = std::to_string(report.event_count) + " events, " + std::to_string(report.audit_checks) +
                 " audited store states, zero violations";
        return report.event_count >= 100000;
    } catch (const InvariantError& err) {
        detail = std::string("audit violation: ") + err.what();
        return false;
    }
}

} // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "epidemic conservation, non-negativity, monotone deaths (1000 random runs)", conservation_suite},
        {2, "immunity returns exactly 30 days after recovery (180-day ledger check)", reinfection_timing},
        {3, "contact-rate uplift never decreases cumulative infections (100 configs)", contact_monotonicity},
        {4, "(Q,R) engine matches the brute-force replay on 1000 demand events", qr_oracle_equivalence},
        {5, "(Q,R) parameters numeric check (Q=70, R=31, z near 1.64485)", qr_numeric_check},
        {6, "zero-epidemic national demand averages 716 units/day (±5%)", precovid_baseline},
        {7, "mean manufacturer demand ordered across demand scenarios", demand_ordering},
        {8, "mitigation trends: dynamic and air freight cut fulfillment tails", mitigation_trends},
        {9, "byte-identical reruns and committed golden report", determinism_golden},
        {10, "inventory position identity audited over 1e5+ events", inventory_audit},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.check(detail);
        } catch (const std::exception& err) {
            detail = std::string("exception: ") + err.what();
        }
        std::printf("%s criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion.number,
                    criterion.title.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        failures += ok ? 0 : 1;
    }

    if (failures > 0) {
        std::printf("%d criterion(s) failing\n", failures);
        return 1;
    }
    std::printf("all %zu criteria pass\n", criteria.size());
    return 0;
}
