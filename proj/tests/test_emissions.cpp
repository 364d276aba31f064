#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "eflight/emissions.hpp"
#include "test_support.hpp"

using namespace eflight;
using testing::data_path;
using testing::defaults;
using testing::fixture_country_ledger;
using testing::fixture_curves;
using testing::fixture_grid;

namespace {

CurveSet single_unit_curve(const std::string& code, double slope, double intercept) {
    CurveSet set;
    set.add(FuelBurnCurve{code, slope, intercept, 2, 0.0}, defaults());
    return set;
}

CountryFlights worked_aggregate(const std::string& country) {
    std::vector<std::tuple<std::string, std::int64_t, double>> rows;
    if (country == "United States")
        rows = {{"A319-100", 31918, 5131164.0},
                {"A320-200", 19266, 2997293.0},
                {"A321-200", 8510, 1371504.0}};
    else
        rows = {{"A319-100", 9945, 1563400.0},
                {"A320-200", 26743, 4261268.0},
                {"A321-200", 4325, 728182.0}};
    return CountryFlights::from_aggregates(country, rows);
}

}  // namespace

TEST_CASE("fuel emissions") {
    auto curves = single_unit_curve("U", 1.0, 0.0);

    SUBCASE("one 100 nm flight at slope 1 burns 100 kg -> 316 kg CO2e") {
        CountryFlights cf{"X", {{"U", 100.0, 1}}};
        CHECK(fuel_emissions_kg(cf, curves, defaults()) == doctest::Approx(316.0).epsilon(1e-12));
    }

    SUBCASE("doubling departures doubles emissions") {
        CountryFlights once{"X", {{"U", 123.0, 3}}};
        CountryFlights twice{"X", {{"U", 123.0, 6}}};
        CHECK(fuel_emissions_kg(twice, curves, defaults()) ==
              doctest::Approx(2.0 * fuel_emissions_kg(once, curves, defaults())).epsilon(1e-12));
    }

    SUBCASE("multi-aircraft multi-route sum matches a hand-enumerated oracle") {
        CurveSet set;
        set.add(FuelBurnCurve{"A", 2.0, 50.0, 2, 0.0}, defaults());
        set.add(FuelBurnCurve{"B", 3.0, 80.0, 2, 0.0}, defaults());
        set.add(FuelBurnCurve{"C", 5.0, 120.0, 2, 0.0}, defaults());
        CountryFlights cf{"X",
                          {{"A", 100.0, 2},
                           {"A", 150.0, 1},
                           {"B", 90.0, 4},
                           {"C", 60.0, 3},
                           {"C", 180.0, 5}}};
        // term by term: (2*100+50)*2 + (2*150+50)*1 + (3*90+80)*4 + (5*60+120)*3 + (5*180+120)*5
        double fuel = 250.0 * 2 + 350.0 * 1 + 350.0 * 4 + 420.0 * 3 + 1020.0 * 5;
        CHECK(fuel_emissions_kg(cf, set, defaults()) ==
              doctest::Approx(fuel * 3.16).epsilon(1e-12));
    }

    SUBCASE("missing curve is an error naming the aircraft") {
        CountryFlights cf{"X", {{"ZZZ", 100.0, 1}}};
        CHECK_THROWS_WITH_AS(fuel_emissions_kg(cf, curves, defaults()),
                             doctest::Contains("ZZZ"), ValidationError);
    }
}

TEST_CASE("electric emissions") {
    auto curves = single_unit_curve("U", 1.0, 0.0);
    CountryFlights cf{"X", {{"U", 100.0, 2}}};

    SUBCASE("zero intensity means zero emissions regardless of energy") {
        GridProfile g{"X", "Nowhere", 1e-30};
        auto r = electric_emissions(cf, curves, g);
        CHECK(r.energy_wh > 0);
        CHECK(r.emissions_kg == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    }

    SUBCASE("hand-computed country") {
        GridProfile g{"X", "Nowhere", 500.0};
        auto r = electric_emissions(cf, curves, g);
        double k = defaults().fuel_to_battery_wh_per_kg();
        CHECK(r.energy_wh == doctest::Approx(200.0 * k).epsilon(1e-12));
        CHECK(r.emissions_kg == doctest::Approx(200.0 * k / 1000.0 * 0.5).epsilon(1e-12));
    }
}

TEST_CASE("tipping point") {
    SUBCASE("US and China worked aggregates sit at the exact-scaled constant") {
        for (const char* c : {"United States", "China"}) {
            double tip = tipping_point_g_per_kwh(worked_aggregate(c), fixture_curves(), defaults());
            CHECK(std::abs(tip - 527.89) <= 0.01);
        }
        double us = tipping_point_g_per_kwh(worked_aggregate("United States"), fixture_curves(),
                                            defaults());
        double cn = tipping_point_g_per_kwh(worked_aggregate("China"), fixture_curves(), defaults());
        CHECK(std::abs(us - 527.99) <= 0.3);  // published US value
        CHECK(std::abs(cn - 528.17) <= 0.3);  // published China value
    }

    SUBCASE("independent of the mix with exact-scaled curves") {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> d(30.0, 199.0);
        const auto& models = testing::fixture_registry().models();
        const double expected = defaults().constant_tipping_g_per_kwh();
        for (int trial = 0; trial < 200; ++trial) {
            CountryFlights cf{"X", {}};
            int legs = 1 + static_cast<int>(rng() % 6);
            for (int i = 0; i < legs; ++i)
                cf.legs.push_back({models[rng() % models.size()].code, d(rng),
                                   1 + static_cast<std::int64_t>(rng() % 50)});
            CHECK(tipping_point_g_per_kwh(cf, fixture_curves(), defaults()) ==
                  doctest::Approx(expected).epsilon(1e-9));
        }
        CHECK(std::abs(expected - 527.89) <= 0.01);
    }

    SUBCASE("zero energy is rejected") {
        CountryFlights cf{"X", {}};
        CHECK_THROWS_AS(tipping_point_g_per_kwh(cf, fixture_curves(), defaults()),
                        ValidationError);
    }
}

TEST_CASE("classification boundary") {
    CHECK(classify(98.35, 530.0) == GridClass::Clean);    // Brazil
    CHECK(classify(713.44, 530.0) == GridClass::Dirty);   // India
    CHECK(classify(530.0, 530.0) == GridClass::Clean);    // boundary is clean
    CHECK(classify(530.0001, 530.0) == GridClass::Dirty);
}

TEST_CASE("aggregation of the bundled country table") {
    const auto& ledger = fixture_country_ledger();
    REQUIRE(ledger.rows().size() == 105);
    auto s = aggregate(ledger, defaults().dirty_grid_g_per_kwh);
    REQUIRE(s.continents.size() == 6);

    // exact sums of the bundled table, frozen from an independent oracle
    struct Cell {
        const char* continent;
        double agg_miles, agg_savings, clean_miles, clean_savings, dirty_miles, dirty_savings;
    };
    const Cell expected[] = {
        {"Africa", 747102, 2386734, 232236, 4699687, 514866, -2312953},
        {"Asia", 61470196, -168623479, 20122252, 84489895, 41347944, -253113374},
        {"Europe", 36702126, 533101758, 36255073, 534038660, 447053, -936902},
        {"North America", 13731056, 104850069, 13621260, 105588359, 109796, -738290},
        {"Oceania", 618759, 12582047, 610777, 12649638, 7982, -67591},
        {"South America", 23886445, 433529587, 23886445, 433529587, 0, 0},
    };
    for (const auto& e : expected) {
        auto it = std::find_if(s.continents.begin(), s.continents.end(),
                               [&](const auto& c) { return c.continent == e.continent; });
        REQUIRE(it != s.continents.end());
        CHECK(it->aggregate.miles_nm == e.agg_miles);
        CHECK(it->aggregate.savings_kg == e.agg_savings);
        CHECK(it->clean.miles_nm == e.clean_miles);
        CHECK(it->clean.savings_kg == e.clean_savings);
        CHECK(it->dirty.miles_nm == e.dirty_miles);
        CHECK(it->dirty.savings_kg == e.dirty_savings);
    }
    CHECK(s.global_net_kg == 917826716.0);  // published 917,826,722; see notes

    // average intensities are unweighted country means
    auto africa = s.continents[0];
    CHECK(*africa.aggregate.avg_intensity_g_per_kwh == doctest::Approx(460.59).epsilon(1e-4));
    CHECK(*africa.clean.avg_intensity_g_per_kwh == doctest::Approx(263.25).epsilon(1e-4));
    CHECK(*africa.dirty.avg_intensity_g_per_kwh == doctest::Approx(629.74).epsilon(1e-4));

    // South America has no dirty miles: per-mile cell is absent
    auto sa = std::find_if(s.continents.begin(), s.continents.end(),
                           [](const auto& c) { return c.continent == "South America"; });
    CHECK_FALSE(sa->dirty.savings_per_mile_kg.has_value());
    CHECK(*sa->aggregate.savings_per_mile_kg == doctest::Approx(18.15).epsilon(1e-3));
}

TEST_CASE("aggregation closure: clean + dirty = aggregate on random splits") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> intensity(10.0, 1200.0);
    std::uniform_real_distribution<double> miles(0.0, 1e7);
    std::uniform_real_distribution<double> savings(-1e8, 2e8);
    std::vector<CountryLedgerRow> rows;
    const char* continents[] = {"Alpha", "Beta", "Gamma"};
    for (int i = 0; i < 200; ++i) {
        CountryLedgerRow r;
        r.country = "C" + std::to_string(i);
        r.continent = continents[rng() % 3];
        r.intensity_g_per_kwh = intensity(rng);
        r.miles_nm = miles(rng);
        r.savings_kg = savings(rng);
        r.tipping_g_per_kwh = 527.9;
        r.from_flight_detail = false;
        rows.push_back(r);
    }
    auto s = aggregate(EmissionsLedger(rows), 530.0);
    for (const auto& c : s.continents) {
        CHECK(c.clean.miles_nm + c.dirty.miles_nm == doctest::Approx(c.aggregate.miles_nm));
        CHECK(c.clean.savings_kg + c.dirty.savings_kg ==
              doctest::Approx(c.aggregate.savings_kg).epsilon(1e-12));
        CHECK(c.clean.countries + c.dirty.countries == c.aggregate.countries);
    }
}

TEST_CASE("empty ledger aggregates to zero") {
    auto s = aggregate(EmissionsLedger(std::vector<CountryLedgerRow>{}), 530.0);
    CHECK(s.continents.empty());
    CHECK(s.global_net_kg == 0.0);
    CHECK(s.global.countries == 0);
}

TEST_CASE("ranking") {
    const auto& ledger = fixture_country_ledger();

    SUBCASE("by savings: Brazil first, India last") {
        auto r = rank(ledger, RankKey::Savings);
        REQUIRE(r.size() == 105);
        CHECK(r.front().country == "Brazil");
        CHECK(r.front().savings_kg == 198824978.0);
        CHECK(r.back().country == "India");
        CHECK(r.back().savings_kg == -91652871.0);
    }

    SUBCASE("by miles within Asia: India first") {
        auto r = rank(ledger, RankKey::Miles, "Asia");
        REQUIRE(r.size() == 36);
        CHECK(r.front().country == "India");
        CHECK(r.front().miles_nm == 9495447.0);
    }

    SUBCASE("single country") {
        CountryLedgerRow row;
        row.country = "Solo";
        row.continent = "X";
        auto r = rank(EmissionsLedger({row}), RankKey::Savings);
        REQUIRE(r.size() == 1);
        CHECK(r.front().country == "Solo");
    }
}

TEST_CASE("grid improvement scenarios on the bundled table") {
    const auto& ledger = fixture_country_ledger();

    SUBCASE("India at 5%") {
        auto s = improvement_scenario(ledger.at("India"), 0.05);
        CHECK(s.absolute_delta_kg == doctest::Approx(17662915).epsilon(0.005));
        CHECK(std::abs(s.relative_delta_pct - 19.27) <= 0.1);
    }

    SUBCASE("fraction 0 gives zero deltas") {
        auto s = improvement_scenario(ledger.at("Brazil"), 0.0);
        CHECK(s.absolute_delta_kg == 0.0);
        CHECK(s.relative_delta_pct == 0.0);
    }

    SUBCASE("linearity in the fraction") {
        auto a = improvement_scenario(ledger.at("Brazil"), 0.02);
        auto b = improvement_scenario(ledger.at("Brazil"), 0.04);
        CHECK(b.absolute_delta_kg == doctest::Approx(2.0 * a.absolute_delta_kg).epsilon(1e-12));
    }

    SUBCASE("degenerate recovery is an explicit error") {
        CountryLedgerRow row;
        row.country = "Edge";
        row.intensity_g_per_kwh = 527.99;
        row.tipping_g_per_kwh = 527.99;
        row.savings_kg = 1000.0;
        row.from_flight_detail = false;
        CHECK_THROWS_WITH_AS(improvement_scenario(row, 0.05),
                             doctest::Contains("degenerate"), ValidationError);
    }

    SUBCASE("out-of-range fraction rejected") {
        CHECK_THROWS_AS(improvement_scenario(ledger.at("Brazil"), 1.5), ValidationError);
        CHECK_THROWS_AS(improvement_scenario(ledger.at("Brazil"), -0.1), ValidationError);
    }
}

TEST_CASE("scenario recovery agrees with direct electric emissions") {
    // build a ledger from flight detail, then replay the scenario through the
    // recovery path and compare
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> d(40.0, 199.0);
    const auto& models = testing::fixture_registry().models();

    std::vector<FlightRecord> records;
    for (int i = 0; i < 500; ++i)
        records.push_back({static_cast<std::uint64_t>(i + 1), models[rng() % models.size()].code,
                           rng() % 2 ? "Brazil" : "India", d(rng),
                           1 + static_cast<std::int64_t>(rng() % 20)});
    auto ledger = build_ledger(records, fixture_curves(), fixture_grid(), defaults());

    for (const auto& row : ledger.rows()) {
        auto direct = improvement_scenario(row, 0.05);
        CountryLedgerRow fixture_like = row;
        fixture_like.from_flight_detail = false;
        auto recovered = improvement_scenario(fixture_like, 0.05);
        CHECK(recovered.absolute_delta_kg ==
              doctest::Approx(direct.absolute_delta_kg).epsilon(1e-9));
    }
}

TEST_CASE("sign law: savings positive iff intensity below tipping") {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> d(30.0, 500.0);
    std::uniform_real_distribution<double> intensity(50.0, 1100.0);
    const auto& models = testing::fixture_registry().models();

    for (int trial = 0; trial < 300; ++trial) {
        CountryFlights cf{"X", {}};
        int legs = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < legs; ++i)
            cf.legs.push_back({models[rng() % models.size()].code, d(rng),
                               1 + static_cast<std::int64_t>(rng() % 30)});
        GridProfile g{"X", "T", intensity(rng)};
        double fuel = fuel_emissions_kg(cf, fixture_curves(), defaults());
        auto electric = electric_emissions(cf, fixture_curves(), g);
        double savings = fuel - electric.emissions_kg;
        double tip = tipping_point_g_per_kwh(cf, fixture_curves(), defaults());
        if (g.intensity_g_per_kwh < tip)
            CHECK(savings > 0);
        else if (g.intensity_g_per_kwh > tip)
            CHECK(savings < 0);
    }
}

TEST_CASE("decomposition") {
    const auto& curves = fixture_curves();

    SUBCASE("India vs Brazil aggregates reproduce the published shares") {
        auto india = CountryFlights::from_aggregates(
            "India", std::vector<std::tuple<std::string, std::int64_t, double>>{
                         {"A320-200", 63199, 9495447.0}});
        auto brazil = CountryFlights::from_aggregates(
            "Brazil", std::vector<std::tuple<std::string, std::int64_t, double>>{
                          {"A320-200", 49640, 9208587.0}});
        auto d = decompose_pair(india, 713.44, brazil, 98.35, curves, defaults());
        CHECK(std::abs(d.grid_pct - 106.0) <= 3.0);
        CHECK(std::abs(d.flights_pct - (-5.0)) <= 3.0);
        CHECK(std::abs(d.distance_pct - (-2.0)) <= 3.0);
        CHECK(std::abs(d.composition_pct - 1.0) <= 3.0);
        CHECK(d.grid_kg + d.flights_kg + d.distance_kg + d.composition_kg ==
              doctest::Approx(d.gap_kg).epsilon(1e-12));
        // mirrored counterfactual intensity lands below the tipping point
        CHECK(d.counterfactual_intensity_g_per_kwh == doctest::Approx(342.34).epsilon(1e-3));
    }

    SUBCASE("identical countries decompose to zero") {
        auto a = CountryFlights::from_aggregates(
            "A", std::vector<std::tuple<std::string, std::int64_t, double>>{
                     {"A320-200", 1000, 150000.0}});
        auto d = decompose_pair(a, 400.0, a, 400.0, curves, defaults());
        CHECK(d.gap_kg == doctest::Approx(0.0).scale(1e8).epsilon(1e-12));
        CHECK(d.grid_kg == doctest::Approx(0.0).scale(1e8).epsilon(1e-12));
        CHECK(d.flights_kg == doctest::Approx(0.0).scale(1e8).epsilon(1e-12));
        CHECK(d.distance_kg == doctest::Approx(0.0).scale(1e8).epsilon(1e-12));
        CHECK(d.composition_kg == doctest::Approx(0.0).scale(1e8).epsilon(1e-12));
    }

    SUBCASE("pair differing only in grid attributes everything to grid") {
        auto mk = [](const char* name) {
            return CountryFlights::from_aggregates(
                name, std::vector<std::tuple<std::string, std::int64_t, double>>{
                          {"A319-100", 800, 120000.0}, {"A321-200", 500, 90000.0}});
        };
        // same side of the tipping point
        auto d1 = decompose_pair(mk("A"), 300.0, mk("B"), 120.0, curves, defaults());
        CHECK(d1.grid_pct == doctest::Approx(100.0).epsilon(1e-9));
        CHECK(d1.flights_kg == doctest::Approx(0.0).scale(1e8).epsilon(1e-12));
        CHECK(d1.distance_kg == doctest::Approx(0.0).scale(1e8).epsilon(1e-12));
        CHECK(d1.composition_kg == doctest::Approx(0.0).scale(1e8).epsilon(1e-12));
        // opposite sides
        auto d2 = decompose_pair(mk("A"), 700.0, mk("B"), 120.0, curves, defaults());
        CHECK(d2.grid_pct == doctest::Approx(100.0).epsilon(1e-9));
        CHECK(d2.composition_kg == doctest::Approx(0.0).scale(1e8).epsilon(1e-12));
    }

    SUBCASE("closure holds on fuzzed pairs") {
        std::mt19937_64 rng(71);
        std::uniform_real_distribution<double> intensity(50.0, 1100.0);
        std::uniform_real_distribution<double> dist(60.0, 199.0);
        const auto& models = testing::fixture_registry().models();
        for (int trial = 0; trial < 300; ++trial) {
            auto mk = [&](const char* name) {
                CountryFlights cf{name, {}};
                int legs = 1 + static_cast<int>(rng() % 4);
                for (int i = 0; i < legs; ++i)
                    cf.legs.push_back({models[rng() % models.size()].code, dist(rng),
                                       1 + static_cast<std::int64_t>(rng() % 5000)});
                return cf;
            };
            auto a = mk("A");
            auto b = mk("B");
            auto d = decompose_pair(a, intensity(rng), b, intensity(rng), curves, defaults());
            double sum = d.grid_kg + d.flights_kg + d.distance_kg + d.composition_kg;
            double scale = std::max(1.0, std::abs(d.gap_kg));
            CHECK(std::abs(sum - d.gap_kg) <= 1e-6 * scale);
        }
    }
}

TEST_CASE("ledger construction from flight records") {
    std::vector<FlightRecord> records = {
        {1, "A320-200", "Brazil", 100.0, 2},
        {2, "A319-100", "Brazil", 150.0, 1},
        {3, "A320-200", "India", 120.0, 3},
        {4, "A321-200", "Atlantis", 90.0, 4},  // no grid profile
    };
    FilterStats stats;
    stats.total_in = 10;
    stats.kept = 10;
    stats.kept_short_haul = 10;
    auto ledger =
        build_ledger(records, fixture_curves(), fixture_grid(), defaults(), &stats);

    CHECK(ledger.rows().size() == 2);
    CHECK(stats.no_grid_data == 4);
    CHECK(stats.kept == 6);
    CHECK(stats.kept_short_haul == 6);
    CHECK(stats.conserved());

    const auto& brazil = ledger.at("Brazil");
    CHECK(brazil.flights == 3);
    CHECK(brazil.miles_nm == doctest::Approx(350.0));
    CHECK(brazil.continent == "South America");
    // savings consistency inside the row
    CHECK(brazil.savings_kg ==
          doctest::Approx(brazil.fuel_emissions_kg - brazil.electric_emissions_kg)
              .epsilon(1e-12));
    // tipping at the exact-scaled constant
    CHECK(brazil.tipping_g_per_kwh ==
          doctest::Approx(defaults().constant_tipping_g_per_kwh()).epsilon(1e-9));
}
