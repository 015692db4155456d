#include "ocsim/epi.hpp"

#include "ocsim/errors.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <numeric>
#include <vector>

using namespace ocsim;

namespace
{

epi::RegionProfile profile(long long population, long long initial, long long capacity = 1000000)
{
    epi::RegionProfile p;
    p.region_id = "TT";
    p.population = population;
    p.initial_infected = initial;
    p.hospital_capacity = capacity;
    return p;
}

epi::EpiParameters quiet_params(int horizon)
{
    epi::EpiParameters p;
    p.contact_schedule.assign(static_cast<std::size_t>(horizon), 0.0);
    p.hospitalization_rate = 0.0;
    p.hospital_mortality_rate = 0.0;
    p.community_mortality_rate = 0.0;
    return p;
}

} // namespace

TEST_CASE("init_region seeds the stocks")
{
    epi::EpiParameters params = quiet_params(10);

    SUBCASE("no seed cases")
    {
        const auto state = epi::init_region(profile(1000000, 0), params);
        CHECK(state.susceptible == 1000000);
        CHECK(state.infectious == 0);
        CHECK(state.hospitalized == 0);
        CHECK(state.deceased == 0);
        CHECK(state.recovered == 0);
        CHECK(state.infection_cohorts.empty());
    }
    SUBCASE("seeded cases form one day-0 cohort")
    {
        const auto state = epi::init_region(profile(1000000, 500), params);
        CHECK(state.susceptible == 999500);
        CHECK(state.infectious == 500);
        REQUIRE(state.infection_cohorts.size() == 1);
        CHECK(state.infection_cohorts.front().day == 0);
        CHECK(state.infection_cohorts.front().count == 500);
    }
    SUBCASE("more seed cases than people is rejected")
    {
        CHECK_THROWS_AS(epi::init_region(profile(100, 101), params), ConfigError);
    }
}

TEST_CASE("infection_flow frequency-dependent incidence")
{
    epi::EpiState state;
    state.population = 1000000;

    SUBCASE("no infectious source")
    {
        state.susceptible = 1000000;
        state.infectious = 0;
        CHECK(epi::infection_flow(state, 2.0, 0.05) == 0);
    }
    SUBCASE("no susceptibles left")
    {
        state.susceptible = 0;
        state.infectious = 1000000;
        CHECK(epi::infection_flow(state, 2.0, 0.05) == 0);
    }
    SUBCASE("hand value")
    {
        state.susceptible = 900000;
        state.infectious = 10000;
        // 2.0 * 0.05 * 900000 * 10000 / 1000000
        CHECK(epi::infection_flow(state, 2.0, 0.05) == 900);
    }
    SUBCASE("clamped at the susceptible stock")
    {
        state.population = 100;
        state.susceptible = 3;
        state.infectious = 97;
        CHECK(epi::infection_flow(state, 50.0, 1.0) == 3);
    }
}

TEST_CASE("sample_los ranges per regime")
{
    epi::EpiParameters params;

    for (std::uint64_t k = 0; k < 500; ++k) {
        rng::Stream s(11, rng::kStreamLos, 0, k);
        const int los = epi::sample_los(s, false, params);
        REQUIRE(los >= 8);
        REQUIRE(los <= 15);
    }
    for (std::uint64_t k = 0; k < 500; ++k) {
        rng::Stream s(11, rng::kStreamLos, 1, k);
        const int los = epi::sample_los(s, true, params);
        REQUIRE(los >= 4);
        REQUIRE(los <= 8);
    }

    // Mean of U[8,15] is 11.5.
    double sum = 0.0;
    for (std::uint64_t k = 0; k < 10000; ++k) {
        rng::Stream s(5, rng::kStreamLos, 2, k);
        sum += epi::sample_los(s, false, params);
    }
    CHECK(sum / 10000.0 == doctest::Approx(11.5).epsilon(0.3 / 11.5));
}

TEST_CASE("step_day leaves a disease-free region untouched")
{
    epi::EpiParameters params = quiet_params(5);
    params.contact_schedule.assign(5, 2.5);
    auto state = epi::init_region(profile(5000, 0), params);

    const auto out = epi::step_day(state, profile(5000, 0), params, 42);
    CHECK(out.new_infections == 0);
    CHECK(out.new_admissions == 0);
    CHECK(out.new_deaths == 0);
    CHECK(out.returns_to_susceptible == 0);
    CHECK(state.susceptible == 5000);
    CHECK(state.day == 1);
}

TEST_CASE("step_day errors when the contact schedule runs out")
{
    epi::EpiParameters params = quiet_params(2);
    const auto p = profile(1000, 10);
    auto state = epi::init_region(p, params);
    epi::step_day(state, p, params, 1);
    epi::step_day(state, p, params, 1);
    CHECK_THROWS_AS(epi::step_day(state, p, params, 1), ConfigError);
}

TEST_CASE("immunity returns land exactly immunity_duration days after recovery")
{
    const int horizon = 60;
    epi::EpiParameters params = quiet_params(horizon);
    params.illness_duration_days = 5;
    params.immunity_duration_days = 30;
    const auto p = profile(1000, 50);

    const auto series = epi::run_epidemic(p, params, horizon, 7);
    for (const auto& day : series) {
        if (day.day == 35) {
            CHECK(day.returns_to_susceptible == 50); // recovered on day 5, back 30 days later
        } else {
            CHECK(day.returns_to_susceptible == 0);
        }
    }
}

TEST_CASE("step_day matches the enumerated hand trace on a 10-person region")
{
    // Forced rates: deterministic lengths of stay (min == max) and zero
    // mortality make every flow hand-computable.
    epi::EpiParameters params;
    params.illness_duration_days = 2;
    params.hospitalization_rate = 0.5;
    params.los_min_days = 2;
    params.los_max_days = 2;
    params.overflow_los_min_days = 3;
    params.overflow_los_max_days = 3;
    params.immunity_duration_days = 3;
    params.infectivity = 1.0;
    params.contact_schedule.assign(10, 0.5);
    params.hospital_mortality_rate = 0.0;
    params.community_mortality_rate = 0.0;

    epi::RegionProfile p = profile(10, 4, 1);
    auto state = epi::init_region(p, params);

    struct Expect {
        long long s, i, h, d, r;
        long long ni, na, nd, nod, ret;
    };
    // Hand-enumerated day by day: infection round(c*p*S*I/N), hospitalization
    // round(0.5*I) admitted one by one against capacity 1, fixed stays, cohort
    // recoveries at day+2, immunity returns at recovery+3.
    const std::vector<Expect> expected = {
        {5, 2, 3, 0, 0, /*ni*/ 1, /*na*/ 3, /*nd*/ 0, /*nod*/ 0, /*ret*/ 0}, // day 0
        {4, 1, 5, 0, 0, 1, 2, 0, 0, 0},                                      // day 1
        {4, 0, 5, 0, 1, 0, 1, 1, 0, 0},                                      // day 2
        {4, 0, 3, 0, 3, 0, 0, 0, 2, 0},                                      // day 3
        {4, 0, 1, 0, 5, 0, 0, 0, 2, 0},                                      // day 4
        {5, 0, 0, 0, 5, 0, 0, 0, 1, 1},                                      // day 5
        {7, 0, 0, 0, 3, 0, 0, 0, 0, 2},                                      // day 6
        {9, 0, 0, 0, 1, 0, 0, 0, 0, 2},                                      // day 7
        {10, 0, 0, 0, 0, 0, 0, 0, 0, 1},                                     // day 8
    };

    for (std::size_t d = 0; d < expected.size(); ++d) {
        CAPTURE(d);
        const auto out = epi::step_day(state, p, params, 99);
        CHECK(state.susceptible == expected[d].s);
        CHECK(state.infectious == expected[d].i);
        CHECK(state.hospitalized == expected[d].h);
        CHECK(state.deceased == expected[d].d);
        CHECK(state.recovered == expected[d].r);
        CHECK(out.new_infections == expected[d].ni);
        CHECK(out.new_admissions == expected[d].na);
        CHECK(out.new_discharges == expected[d].nd);
        CHECK(out.new_overflow_discharges == expected[d].nod);
        CHECK(out.returns_to_susceptible == expected[d].ret);
    }
}

TEST_CASE("run_epidemic basics")
{
    epi::EpiParameters params = quiet_params(1);
    const auto p = profile(500, 5);

    SUBCASE("horizon one gives exactly one output")
    {
        const auto series = epi::run_epidemic(p, params, 1, 3);
        CHECK(series.size() == 1);
        CHECK(series[0].day == 0);
    }
    SUBCASE("horizon zero rejected")
    {
        CHECK_THROWS_AS(epi::run_epidemic(p, params, 0, 3), ConfigError);
    }
}

TEST_CASE("same seed reproduces the series bit for bit")
{
    rng::Stream gen(2024, rng::kStreamGeneric);
    const auto cfg = support::random_epi_config(gen, 120);
    const auto a = epi::run_epidemic(cfg.profile, cfg.params, cfg.horizon, 77);
    const auto b = epi::run_epidemic(cfg.profile, cfg.params, cfg.horizon, 77);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].new_infections == b[i].new_infections);
        CHECK(a[i].new_admissions == b[i].new_admissions);
        CHECK(a[i].new_discharges == b[i].new_discharges);
        CHECK(a[i].new_overflow_discharges == b[i].new_overflow_discharges);
        CHECK(a[i].new_deaths == b[i].new_deaths);
        CHECK(a[i].returns_to_susceptible == b[i].returns_to_susceptible);
        CHECK(a[i].infectious_count == b[i].infectious_count);
        CHECK(a[i].hospitalized_count == b[i].hospitalized_count);
    }
}

TEST_CASE("scaling the contact schedule up never loses infections (spot check)")
{
    epi::EpiParameters params;
    params.contact_schedule.assign(200, 1.8);
    const auto p = profile(200000, 400, 500);

    auto cumulative = [&](const epi::EpiParameters& pp) {
        const auto series = epi::run_epidemic(p, pp, 200, 11);
        long long total = 0;
        for (const auto& day : series) {
            total += day.new_infections;
        }
        return total;
    };

    epi::EpiParameters scaled = params;
    for (double& c : scaled.contact_schedule) {
        c *= 1.001;
    }
    CHECK(cumulative(scaled) >= cumulative(params));
}

TEST_CASE("conservation, non-negativity and monotone deaths on random configurations")
{
    rng::Stream gen(5150, rng::kStreamGeneric);
    for (int trial = 0; trial < 40; ++trial) {
        CAPTURE(trial);
        const auto cfg = support::random_epi_config(gen, 150);
        auto state = epi::init_region(cfg.profile, cfg.params);
        long long last_deceased = 0;
        for (int day = 0; day < cfg.horizon; ++day) {
            const auto out = epi::step_day(state, cfg.profile, cfg.params, 1000 + trial);
            // step_day already asserts exact conservation; re-check from outside.
            REQUIRE(state.stock_sum() == cfg.profile.population);
            REQUIRE(state.susceptible >= 0);
            REQUIRE(state.infectious >= 0);
            REQUIRE(state.hospitalized >= 0);
            REQUIRE(state.recovered >= 0);
            REQUIRE(state.deceased >= last_deceased);
            REQUIRE(out.new_infections >= 0);
            REQUIRE(out.new_admissions >= 0);
            REQUIRE(out.new_deaths >= 0);
            last_deceased = state.deceased;
        }
    }
}

TEST_CASE("admission ledger stays within the declared stay bounds per regime")
{
    epi::EpiParameters params;
    params.contact_schedule.assign(80, 2.2);
    params.hospitalization_rate = 0.05;
    const auto p = profile(20000, 200, 40); // small capacity forces the overflow regime

    auto state = epi::init_region(p, params);
    for (int day = 0; day < 80; ++day) {
        epi::step_day(state, p, params, 31);
    }

    std::size_t normal = 0;
    std::size_t overflow = 0;
    for (const auto& bucket : state.discharge_buckets) {
        for (const auto& adm : bucket) {
            const int los = adm.discharge_day - adm.admission_day;
            REQUIRE(los > 0);
            if (adm.overflow) {
                REQUIRE(los >= 4);
                REQUIRE(los <= 8);
                ++overflow;
            } else {
                REQUIRE(los >= 8);
                REQUIRE(los <= 15);
                ++normal;
            }
        }
    }
    CHECK(normal > 0);
    CHECK(overflow > 0);
}
