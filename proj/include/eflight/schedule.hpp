#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "eflight/aircraft.hpp"

#include <json.hpp>

namespace eflight {

enum class ServiceClass {
    PassengerFlight,
    Limo,
    Bus,
    Train,
    Helicopter,
    RoadFeeder,
    Freighter,
};

std::string_view to_string(ServiceClass c);
ServiceClass service_class_from_string(std::string_view s);

// One row of the raw schedule feed. `departures` is the number of flights the
// row represents; rows are never exploded.
struct RawRecord {
    std::uint64_t record_id = 0;
    ServiceClass service_class = ServiceClass::PassengerFlight;
    std::string aircraft_code;
    std::string origin_airport;
    std::string origin_country;
    std::string destination_airport;
    double distance_nm = 0;
    std::int64_t departures = 1;
};

// A schedule row that survived filtering; code resolves to a registry model.
struct FlightRecord {
    std::uint64_t record_id = 0;
    std::string aircraft_code;
    std::string origin_country;
    double distance_nm = 0;
    std::int64_t departures = 1;

    bool operator==(const FlightRecord&) const = default;
};

struct ParseDiagnostic {
    std::size_t line = 0;
    std::string message;
};

struct IngestResult {
    std::vector<RawRecord> records;
    std::vector<ParseDiagnostic> diagnostics;  // malformed rows, never silently dropped
};

IngestResult ingest(std::istream& in);
IngestResult ingest_file(const std::string& path);

// Flight-count bookkeeping for every exclusion applied to the raw feed.
// All counters are departures-weighted; integer arithmetic keeps merged
// stats bit-exact regardless of chunking.
struct FilterStats {
    std::int64_t total_in = 0;
    std::int64_t limo = 0;
    std::int64_t bus = 0;
    std::int64_t train = 0;
    std::int64_t helicopter = 0;
    std::int64_t road_feeder = 0;
    std::int64_t freighter = 0;
    std::int64_t uncommon_model = 0;
    std::int64_t no_fuel_data = 0;
    std::int64_t ambiguous_label = 0;
    std::int64_t no_grid_data = 0;
    std::int64_t kept = 0;
    std::int64_t kept_short_haul = 0;

    std::int64_t excluded_total() const {
        return limo + bus + train + helicopter + road_feeder + freighter + uncommon_model +
               no_fuel_data + ambiguous_label + no_grid_data;
    }
    bool conserved() const { return kept + excluded_total() == total_in; }

    FilterStats& operator+=(const FilterStats& o);
    bool operator==(const FilterStats&) const = default;

    nlohmann::json to_json() const;
};

// Deny-lists driving the model exclusions; explicit files, no heuristics.
struct LabelLists {
    std::unordered_set<std::string> uncommon_models;
    std::unordered_set<std::string> ambiguous_labels;

    static std::unordered_set<std::string> load_list_file(const std::string& path);
};

enum class Execution { Serial, Parallel };

struct FilterResult {
    std::vector<FlightRecord> kept;  // input order preserved
    FilterStats stats;
};

// Applies the exclusion taxonomy: service class, uncommon-model list,
// registry membership (no fuel data otherwise), ambiguous-label list.
// Serial and parallel paths produce bit-identical results.
FilterResult filter_commercial(std::span<const RawRecord> records,
                               const AircraftRegistry& registry, const LabelLists& lists,
                               double short_haul_nm, Execution exec = Execution::Serial);

// Strictly below the threshold ("below 200 nautical miles").
std::vector<FlightRecord> short_haul(std::span<const FlightRecord> records, double threshold_nm);

struct DeploymentStats {
    std::int64_t flights = 0;            // departures flown by the model set
    std::int64_t total_flights = 0;      // departures across all records seen
    double share = 0;                    // flights / total_flights
    // miles flown per (aircraft code, origin country), departures-weighted
    std::map<std::pair<std::string, std::string>, double> miles;

    bool operator==(const DeploymentStats&) const = default;
};

DeploymentStats deployment_stats(std::span<const FlightRecord> records,
                                 const std::set<std::string>& model_set);

// Haversine great-circle distance on a 6371 km sphere, in nautical miles.
double great_circle_nm(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg);

// Published funnel counts from the proprietary source feed; kept as reference
// constants only (a consistency test checks the arithmetic, nothing re-derives
// them).
struct ReferenceFunnel {
    static constexpr std::int64_t total_2019 = 48'203'125;
    static constexpr std::int64_t limos = 1'926;
    static constexpr std::int64_t buses = 485'770;
    static constexpr std::int64_t trains = 2'844'077;
    static constexpr std::int64_t helicopters = 594'663;
    static constexpr std::int64_t road_feeder = 5'255'037;
    static constexpr std::int64_t freighters = 602'374;
    static constexpr std::int64_t after_service_classes = 38'419'278;
    static constexpr std::int64_t uncommon_models = 2'436'131;
    static constexpr std::int64_t no_fuel_data = 453'600;
    static constexpr std::int64_t ambiguous_labels = 2'028'052;
    static constexpr std::int64_t final_commercial = 33'501'495;
    static constexpr std::int64_t short_haul_flights = 4'364'491;
    static constexpr std::int64_t trio_short_haul = 885'894;     // A319/A320/A321
    static constexpr std::int64_t trio_with_grid = 879'530;      // after grid-data gaps
};

}  // namespace eflight
