#include "eflight/corpus.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <random>

namespace eflight {

namespace {

// Self-contained bounded draws so corpora are byte-identical across
// standard-library implementations.
struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    std::uint64_t bounded(std::uint64_t n) { return engine() % n; }
    std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(bounded(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    double unit() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
};

const char* kUncommonCodes[] = {"AN-2", "DC-3", "C208", "IL-96", "BE20"};
const char* kAmbiguousLabels[] = {"A320 family", "Boeing 777 all pax models",
                                  "B737 all pax models", "EMB-170/175/190/195",
                                  "A330 all pax models"};
const char* kNoFuelCodes[] = {"B707", "CONCORDE", "TU-154", "DC-10", "L-1011"};
const char* kUnknownCountries[] = {"Atlantis", "Macau", "Jersey", "Narnia"};

}  // namespace

nlohmann::json CorpusManifest::to_json() const {
    nlohmann::json miles = nlohmann::json::array();
    for (const auto& m : kept_miles)
        miles.push_back({{"aircraft_code", m.aircraft_code},
                         {"origin_country", m.origin_country},
                         {"flights", m.flights},
                         {"miles_nm", m.miles_nm}});
    return {{"rows", rows},
            {"expected_stats", expected.to_json()},
            {"kept_rows", kept_rows},
            {"kept_miles", miles}};
}

CorpusManifest generate_corpus(const CorpusSpec& spec, const AircraftRegistry& registry,
                               std::span<const std::string> countries, double short_haul_nm,
                               std::ostream& out) {
    if (spec.rows <= 0) throw ValidationError("corpus rows must be positive");
    if (countries.empty()) throw ValidationError("corpus needs at least one country");

    Rng rng(spec.seed);
    CorpusManifest manifest;
    manifest.rows = spec.rows;
    std::map<std::pair<std::string, std::string>, std::pair<std::int64_t, double>> kept;

    out << "record_id,service_class,aircraft_code,origin_airport,origin_country,"
           "destination_airport,distance_nm,departures\n";

    const double p_limo = spec.limo;
    const double p_bus = p_limo + spec.bus;
    const double p_train = p_bus + spec.train;
    const double p_heli = p_train + spec.helicopter;
    const double p_road = p_heli + spec.road_feeder;
    const double p_freight = p_road + spec.freighter;
    const double p_uncommon = p_freight + spec.uncommon;
    const double p_ambiguous = p_uncommon + spec.ambiguous;
    const double p_no_fuel = p_ambiguous + spec.no_fuel;

    std::string line;
    line.reserve(160);
    for (std::int64_t id = 1; id <= spec.rows; ++id) {
        const double roll = rng.unit();
        const std::int64_t departures = rng.range(1, 10);
        ServiceClass cls = ServiceClass::PassengerFlight;
        std::string code;
        std::string country(countries[rng.bounded(countries.size())]);
        std::int64_t distance = rng.range(200, 2999);
        bool count_kept = false;

        auto& s = manifest.expected;
        s.total_in += departures;
        if (roll < p_limo) {
            cls = ServiceClass::Limo;
            s.limo += departures;
            distance = rng.range(1, 40);
        } else if (roll < p_bus) {
            cls = ServiceClass::Bus;
            s.bus += departures;
            distance = rng.range(1, 80);
        } else if (roll < p_train) {
            cls = ServiceClass::Train;
            s.train += departures;
            distance = rng.range(10, 300);
        } else if (roll < p_heli) {
            cls = ServiceClass::Helicopter;
            code = "H155";
            s.helicopter += departures;
            distance = rng.range(1, 60);
        } else if (roll < p_road) {
            cls = ServiceClass::RoadFeeder;
            s.road_feeder += departures;
            distance = rng.range(1, 150);
        } else if (roll < p_freight) {
            cls = ServiceClass::Freighter;
            code = "B747-400";
            s.freighter += departures;
        } else if (roll < p_uncommon) {
            code = kUncommonCodes[rng.bounded(std::size(kUncommonCodes))];
            s.uncommon_model += departures;
            distance = rng.range(30, 999);
        } else if (roll < p_ambiguous) {
            code = kAmbiguousLabels[rng.bounded(std::size(kAmbiguousLabels))];
            s.ambiguous_label += departures;
            distance = rng.range(30, 999);
        } else if (roll < p_no_fuel) {
            code = kNoFuelCodes[rng.bounded(std::size(kNoFuelCodes))];
            s.no_fuel_data += departures;
            distance = rng.range(30, 999);
        } else {
            const auto& model =
                registry.models()[rng.bounded(registry.size())];
            code = model.code;
            const bool short_leg = rng.unit() < spec.short_haul_fraction;
            distance = short_leg ? rng.range(30, 199)
                                 : rng.range(200, 2999);
            const bool no_grid = rng.unit() < spec.unknown_country_fraction;
            if (no_grid) {
                country = kUnknownCountries[rng.bounded(std::size(kUnknownCountries))];
                s.no_grid_data += departures;
            } else {
                s.kept += departures;
                if (static_cast<double>(distance) < short_haul_nm)
                    s.kept_short_haul += departures;
                auto& agg = kept[{code, country}];
                agg.first += departures;
                agg.second += static_cast<double>(distance) * static_cast<double>(departures);
                count_kept = true;
            }
        }

        line.clear();
        line += std::to_string(id);
        line += ',';
        line += to_string(cls);
        line += ',';
        line += code;
        line += ",AP";
        line += std::to_string(1 + rng.bounded(400));
        line += ',';
        line += country;
        line += ",AP";
        line += std::to_string(1 + rng.bounded(400));
        line += ',';
        line += std::to_string(distance);
        line += ',';
        line += std::to_string(departures);
        line += '\n';
        out << line;
        if (count_kept) ++manifest.kept_rows;
    }

    for (const auto& [key, agg] : kept)
        manifest.kept_miles.push_back({key.first, key.second, agg.first, agg.second});
    return manifest;
}

}  // namespace eflight
