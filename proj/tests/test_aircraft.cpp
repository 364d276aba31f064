#include <doctest.h>

#include <sstream>

#include "eflight/aircraft.hpp"
#include "eflight/propulsion.hpp"
#include "test_support.hpp"

using namespace eflight;
using testing::defaults;
using testing::fixture_registry;

TEST_CASE("bundled registry loads 47 models partitioned 4/13/14/16") {
    const auto& reg = fixture_registry();
    CHECK(reg.size() == 47);
    auto counts = reg.category_counts();
    CHECK(counts[static_cast<size_t>(AircraftCategory::Turboprop)] == 4);
    CHECK(counts[static_cast<size_t>(AircraftCategory::RegionalJet)] == 13);
    CHECK(counts[static_cast<size_t>(AircraftCategory::Narrowbody)] == 14);
    CHECK(counts[static_cast<size_t>(AircraftCategory::Widebody)] == 16);
}

TEST_CASE("category mapping") {
    const auto& reg = fixture_registry();
    CHECK(reg.category_of("ATR 72") == AircraftCategory::Turboprop);
    CHECK(reg.category_of("A320-200") == AircraftCategory::Narrowbody);
    // the EMB-120 sits with the regional jets; that grouping is the only one
    // reproducing the published category means
    CHECK(reg.category_of("EMB-120") == AircraftCategory::RegionalJet);
    CHECK(reg.category_of("Dornier 328") == AircraftCategory::Turboprop);
    CHECK_THROWS_AS((void)reg.category_of("A220"), ValidationError);
}

TEST_CASE("pax weight column equals seats x 95 for every row") {
    for (const auto& m : fixture_registry().models())
        CHECK(m.pax_weight_kg == doctest::Approx(m.seats * 95.0).epsilon(1e-12));
}

TEST_CASE("masses are positive and MLW never exceeds MTOW") {
    for (const auto& m : fixture_registry().models()) {
        CHECK(m.empty_weight_kg > 0);
        CHECK(m.mlw_kg <= m.mtow_kg);
        CHECK(m.empty_weight_kg + m.pax_weight_kg < m.mtow_kg);
    }
}

TEST_CASE("load rejects bad inputs with named diagnostics") {
    SUBCASE("empty stream") {
        std::istringstream in("");
        CHECK_THROWS_WITH_AS(AircraftRegistry::load(in), doctest::Contains("no aircraft rows"),
                             ValidationError);
    }
    SUBCASE("header only") {
        std::istringstream in("code,category,seats,empty_kg,pax_kg,fuel_200nm_kg,mtow_kg,mlw_kg\n");
        CHECK_THROWS_WITH_AS(AircraftRegistry::load(in), doctest::Contains("no aircraft rows"),
                             ValidationError);
    }
    SUBCASE("missing column") {
        std::istringstream in("code,category,seats,empty_kg,pax_kg,fuel_200nm_kg,mtow_kg\nX,turboprop,1,1,1,1,1\n");
        CHECK_THROWS_WITH_AS(AircraftRegistry::load(in), doctest::Contains("expected 8 columns"),
                             ValidationError);
    }
    SUBCASE("duplicate code") {
        std::istringstream in(
            "code,category,seats,empty_kg,pax_kg,fuel_200nm_kg,mtow_kg,mlw_kg\n"
            "EMB170,regional_jet,80,20646,7600,1091,36525,32800\n"
            "EMB170,regional_jet,80,20646,7600,1091,36525,32800\n");
        CHECK_THROWS_WITH_AS(AircraftRegistry::load(in), doctest::Contains("duplicate aircraft code"),
                             ValidationError);
    }
    SUBCASE("non-positive mass") {
        std::istringstream in(
            "code,category,seats,empty_kg,pax_kg,fuel_200nm_kg,mtow_kg,mlw_kg\n"
            "X,turboprop,30,0,2850,525,11500,11250\n");
        CHECK_THROWS_WITH_AS(AircraftRegistry::load(in), doctest::Contains("non-positive empty weight"),
                             ValidationError);
    }
    SUBCASE("MLW above MTOW") {
        std::istringstream in(
            "code,category,seats,empty_kg,pax_kg,fuel_200nm_kg,mtow_kg,mlw_kg\n"
            "X,turboprop,30,7070,2850,525,11500,11750\n");
        CHECK_THROWS_WITH_AS(AircraftRegistry::load(in), doctest::Contains("MLW exceeds MTOW"),
                             ValidationError);
    }
}

TEST_CASE("registry round-trips through csv and json") {
    const auto& reg = fixture_registry();

    std::ostringstream csv_out;
    reg.write_csv(csv_out);
    std::istringstream csv_in(csv_out.str());
    CHECK(AircraftRegistry::load(csv_in) == reg);

    CHECK(AircraftRegistry::from_json(reg.to_json()) == reg);
}

TEST_CASE("category_summary") {
    const auto& reg = fixture_registry();

    SUBCASE("constant metric gives 1.0 everywhere") {
        auto s = category_summary(reg, [](const AircraftModel&) { return 1.0; });
        for (double m : s.category_mean) CHECK(m == doctest::Approx(1.0));
        CHECK(s.overall_mean == doctest::Approx(1.0));
    }

    SUBCASE("exceedance means match the published category averages") {
        auto s = category_summary(reg, [](const AircraftModel& m) {
            return exceedance(m, defaults()).ratio;
        });
        const double expected[] = {1.72, 1.66, 1.47, 1.30};  // tp, rj, nb, wb
        for (size_t i = 0; i < 4; ++i)
            CHECK(std::abs(s.category_mean[i] - expected[i]) <= 0.01);
    }

    SUBCASE("requisite-density means match the published category averages") {
        auto s = category_summary(reg, [](const AircraftModel& m) {
            return requisite_density(m, defaults(), LimitKind::Mlw);
        });
        const double expected[] = {2144, 1979, 1314, 818};
        for (size_t i = 0; i < 4; ++i)
            CHECK(s.category_mean[i] == doctest::Approx(expected[i]).epsilon(0.01));
    }
}
