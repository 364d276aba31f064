#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "eflight/aircraft.hpp"
#include "eflight/schedule.hpp"

#include <json.hpp>

namespace eflight {

// Seeded synthetic schedule feed for testing at scale. The generator tallies
// exactly what it plants; the manifest is the oracle the pipeline must match.
struct CorpusSpec {
    std::uint64_t seed = 42;
    std::int64_t rows = 1'000'000;
    double short_haul_fraction = 0.13;     // of kept passenger rows
    double unknown_country_fraction = 0.015;
    // per-row probabilities of the planted exclusions (non-passenger classes
    // plus the three model buckets)
    double limo = 0.002, bus = 0.010, train = 0.012, helicopter = 0.008;
    double road_feeder = 0.020, freighter = 0.012;
    double uncommon = 0.020, ambiguous = 0.020, no_fuel = 0.015;
};

struct PlantedMiles {
    std::string aircraft_code;
    std::string origin_country;
    std::int64_t flights = 0;
    double miles_nm = 0;
};

struct CorpusManifest {
    std::int64_t rows = 0;
    FilterStats expected;                  // after filter + grid attachment
    std::int64_t kept_rows = 0;
    std::vector<PlantedMiles> kept_miles;  // kept rows with grid data, sorted

    nlohmann::json to_json() const;
};

CorpusManifest generate_corpus(const CorpusSpec& spec, const AircraftRegistry& registry,
                               std::span<const std::string> countries, double short_haul_nm,
                               std::ostream& out);

}  // namespace eflight
