#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eflight/fuel_curves.hpp"
#include "eflight/params.hpp"
#include "eflight/schedule.hpp"

namespace eflight {

struct GridProfile {
    std::string country;
    std::string continent;
    double intensity_g_per_kwh = 0;
};

class GridTable {
public:
    static GridTable load(std::istream& in);
    static GridTable load_file(const std::string& path);
    static GridTable from_profiles(std::vector<GridProfile> profiles);

    const GridProfile* find(std::string_view country) const;
    const std::vector<GridProfile>& profiles() const { return profiles_; }
    std::size_t size() const { return profiles_.size(); }

private:
    std::vector<GridProfile> profiles_;
    std::unordered_map<std::string, std::size_t> by_country_;
};

// One aircraft/route slice of a country's flying.
struct FlightLeg {
    std::string aircraft_code;
    double distance_nm = 0;
    std::int64_t departures = 0;
};

struct CountryFlights {
    std::string country;
    std::vector<FlightLeg> legs;  // canonical order (ascending record id at build)

    std::int64_t total_flights() const;
    double total_miles() const;

    // Collapse per-aircraft totals into one leg each (distance = miles/flights);
    // the affine curve math makes this exactly equivalent to the route lists.
    static CountryFlights from_aggregates(
        std::string country,
        std::span<const std::tuple<std::string, std::int64_t, double>> per_aircraft);
};

double fuel_emissions_kg(const CountryFlights& cf, const CurveSet& curves,
                         const ModelParameters& params);

struct ElectricResult {
    double energy_wh = 0;
    double emissions_kg = 0;
};

ElectricResult electric_emissions(const CountryFlights& cf, const CurveSet& curves,
                                  const GridProfile& grid);

// Grid intensity at which electric and kerosene emissions equalize for this mix.
double tipping_point_g_per_kwh(const CountryFlights& cf, const CurveSet& curves,
                               const ModelParameters& params);

enum class GridClass { Clean, Dirty };

// Dirty iff intensity strictly exceeds the comparator.
GridClass classify(double intensity_g_per_kwh, double comparator_g_per_kwh);
std::string_view to_string(GridClass c);

struct CountryLedgerRow {
    std::string country;
    std::string continent;
    double intensity_g_per_kwh = 0;
    double tipping_g_per_kwh = 0;
    double miles_nm = 0;
    std::int64_t flights = 0;
    double fuel_emissions_kg = 0;
    double electric_energy_wh = 0;
    double electric_emissions_kg = 0;
    double savings_kg = 0;  // fuel minus electric
    bool from_flight_detail = true;

    bool operator==(const CountryLedgerRow&) const = default;
};

class EmissionsLedger {
public:
    explicit EmissionsLedger(std::vector<CountryLedgerRow> rows = {});

    const std::vector<CountryLedgerRow>& rows() const { return rows_; }
    const CountryLedgerRow* find(std::string_view country) const;
    const CountryLedgerRow& at(std::string_view country) const;

    bool operator==(const EmissionsLedger& o) const { return rows_ == o.rows_; }

private:
    std::vector<CountryLedgerRow> rows_;  // sorted by country name
};

// Drops records whose origin country has no grid profile, tallying them to
// stats->no_grid_data (and out of kept/kept_short_haul) when stats is given.
std::vector<FlightRecord> attach_grid(std::span<const FlightRecord> records,
                                      const GridTable& grids, const ModelParameters& params,
                                      FilterStats* stats = nullptr);

// Aggregates flight records into per-country rows. Records without a grid
// profile are tallied as in attach_grid. Serial and parallel paths are
// bit-identical: contributions are folded per country in ascending
// record-id order regardless of input chunking.
EmissionsLedger build_ledger(std::span<const FlightRecord> records, const CurveSet& curves,
                             const GridTable& grids, const ModelParameters& params,
                             FilterStats* stats = nullptr, Execution exec = Execution::Serial);

// Bundled country-table mode (country,continent,intensity,tipping,miles,savings):
// rows carry no flight detail; electric emissions are recovered on demand.
EmissionsLedger load_country_table(std::istream& in);
EmissionsLedger load_country_table_file(const std::string& path);

struct GroupCell {
    double miles_nm = 0;
    double savings_kg = 0;
    int countries = 0;
    std::optional<double> avg_intensity_g_per_kwh;  // unweighted country mean
    std::optional<double> savings_per_mile_kg;      // absent when no miles
};

struct ContinentSummary {
    std::string continent;
    GroupCell aggregate, clean, dirty;
};

struct AggregateSummary {
    std::vector<ContinentSummary> continents;  // sorted by name
    GroupCell global;
    double global_net_kg = 0;
};

AggregateSummary aggregate(const EmissionsLedger& ledger, double dirty_comparator_g_per_kwh);

enum class RankKey { Savings, Miles };

// Stable descending order by key, ties broken by country name.
std::vector<CountryLedgerRow> rank(const EmissionsLedger& ledger, RankKey key,
                                   const std::string& continent_filter = "");

struct ScenarioResult {
    std::string country;
    double improvement_fraction = 0;
    double absolute_delta_kg = 0;   // fraction x electric emissions
    double relative_delta_pct = 0;  // 100 x absolute / |savings|
};

// Emissions effect of improving the grid intensity by `fraction`. Rows built
// from flight detail use their computed electric emissions; fixture rows
// recover them via energy = savings / (tipping - intensity).
ScenarioResult improvement_scenario(const CountryLedgerRow& row, double fraction);

struct DecompositionResult {
    std::string country_a, country_b;
    double gap_kg = 0;  // |savings B| - |savings A|
    double grid_kg = 0, flights_kg = 0, distance_kg = 0, composition_kg = 0;
    double grid_pct = 0, flights_pct = 0, distance_pct = 0, composition_pct = 0;
    double counterfactual_intensity_g_per_kwh = 0;
};

// Sequential substitution toward A in the published order: grid intensity
// (A's relative tipping-point offset projected onto B, mirrored across the
// tipping point when the two countries sit on opposite sides), then total
// flights, then total distance; composition closes the gap exactly.
DecompositionResult decompose_pair(const CountryFlights& a, double intensity_a,
                                   const CountryFlights& b, double intensity_b,
                                   const CurveSet& curves, const ModelParameters& params);

}  // namespace eflight
