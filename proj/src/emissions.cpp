#include "eflight/emissions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>

#include "eflight/csv.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eflight {

GridTable GridTable::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        csv::split(line) != std::vector<std::string_view>{"country", "continent",
                                                          "intensity_g_per_kwh"})
        throw ValidationError("grid file: expected header 'country,continent,intensity_g_per_kwh'");
    std::vector<GridProfile> profiles;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::is_comment_or_blank(line)) continue;
        auto f = csv::split(line);
        if (f.size() != 3)
            throw ValidationError("line " + std::to_string(line_no) + ": expected 3 fields");
        GridProfile p{std::string(f[0]), std::string(f[1]),
                      csv::parse_double(f[2], "intensity_g_per_kwh", line_no)};
        if (!(p.intensity_g_per_kwh > 0))
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": grid intensity must be positive");
        profiles.push_back(std::move(p));
    }
    return from_profiles(std::move(profiles));
}

GridTable GridTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open grid file: " + path);
    return load(in);
}

GridTable GridTable::from_profiles(std::vector<GridProfile> profiles) {
    GridTable t;
    t.profiles_ = std::move(profiles);
    for (size_t i = 0; i < t.profiles_.size(); ++i) {
        auto [it, inserted] = t.by_country_.emplace(t.profiles_[i].country, i);
        if (!inserted)
            throw ValidationError("duplicate grid profile for '" + t.profiles_[i].country + "'");
    }
    return t;
}

const GridProfile* GridTable::find(std::string_view country) const {
    auto it = by_country_.find(std::string(country));
    return it == by_country_.end() ? nullptr : &profiles_[it->second];
}

std::int64_t CountryFlights::total_flights() const {
    std::int64_t n = 0;
    for (const auto& l : legs) n += l.departures;
    return n;
}

double CountryFlights::total_miles() const {
    double m = 0;
    for (const auto& l : legs) m += l.distance_nm * static_cast<double>(l.departures);
    return m;
}

CountryFlights CountryFlights::from_aggregates(
    std::string country,
    std::span<const std::tuple<std::string, std::int64_t, double>> per_aircraft) {
    CountryFlights cf;
    cf.country = std::move(country);
    for (const auto& [code, flights, miles] : per_aircraft) {
        if (flights <= 0) throw ValidationError("aggregate flights must be positive");
        cf.legs.push_back({code, miles / static_cast<double>(flights), flights});
    }
    return cf;
}

double fuel_emissions_kg(const CountryFlights& cf, const CurveSet& curves,
                         const ModelParameters& params) {
    double fuel_kg = 0;
    for (const auto& l : cf.legs)
        fuel_kg += curves.fuel_at(l.aircraft_code).predict(l.distance_nm) *
                   static_cast<double>(l.departures);
    return fuel_kg * params.ci_fuel_kg_per_kg;
}

ElectricResult electric_emissions(const CountryFlights& cf, const CurveSet& curves,
                                  const GridProfile& grid) {
    ElectricResult r;
    for (const auto& l : cf.legs)
        r.energy_wh += curves.electric_at(l.aircraft_code).predict(l.distance_nm) *
                       static_cast<double>(l.departures);
    r.emissions_kg = r.energy_wh / 1000.0 * grid.intensity_g_per_kwh / 1000.0;
    return r;
}

double tipping_point_g_per_kwh(const CountryFlights& cf, const CurveSet& curves,
                               const ModelParameters& params) {
    double energy_wh = 0;
    for (const auto& l : cf.legs)
        energy_wh += curves.electric_at(l.aircraft_code).predict(l.distance_nm) *
                     static_cast<double>(l.departures);
    if (!(energy_wh > 0)) throw ValidationError("tipping point undefined for zero electric energy");
    const double fuel_g = fuel_emissions_kg(cf, curves, params) * 1000.0;
    return fuel_g / (energy_wh / 1000.0);
}

GridClass classify(double intensity_g_per_kwh, double comparator_g_per_kwh) {
    return intensity_g_per_kwh > comparator_g_per_kwh ? GridClass::Dirty : GridClass::Clean;
}

std::string_view to_string(GridClass c) {
    return c == GridClass::Clean ? "clean" : "dirty";
}

EmissionsLedger::EmissionsLedger(std::vector<CountryLedgerRow> rows) : rows_(std::move(rows)) {
    std::sort(rows_.begin(), rows_.end(),
              [](const auto& a, const auto& b) { return a.country < b.country; });
}

const CountryLedgerRow* EmissionsLedger::find(std::string_view country) const {
    auto it = std::lower_bound(rows_.begin(), rows_.end(), country,
                               [](const CountryLedgerRow& r, std::string_view c) {
                                   return std::string_view(r.country) < c;
                               });
    return (it != rows_.end() && it->country == country) ? &*it : nullptr;
}

const CountryLedgerRow& EmissionsLedger::at(std::string_view country) const {
    const auto* r = find(country);
    if (!r) throw ValidationError("no ledger row for country '" + std::string(country) + "'");
    return *r;
}

namespace {

// Per-record contribution; grams internally.
struct Contribution {
    double miles = 0;
    double fuel_g = 0;
    double energy_wh = 0;
    std::int64_t departures = 0;
};

bool canonical_less(const FlightRecord& a, const FlightRecord& b) {
    if (a.record_id != b.record_id) return a.record_id < b.record_id;
    if (a.origin_country != b.origin_country) return a.origin_country < b.origin_country;
    if (a.aircraft_code != b.aircraft_code) return a.aircraft_code < b.aircraft_code;
    if (a.distance_nm != b.distance_nm) return a.distance_nm < b.distance_nm;
    return a.departures < b.departures;
}

}  // namespace

std::vector<FlightRecord> attach_grid(std::span<const FlightRecord> records,
                                      const GridTable& grids, const ModelParameters& params,
                                      FilterStats* stats) {
    std::vector<FlightRecord> usable;
    usable.reserve(records.size());
    for (const auto& r : records) {
        if (grids.find(r.origin_country) == nullptr) {
            if (stats) {
                stats->no_grid_data += r.departures;
                stats->kept -= r.departures;
                if (r.distance_nm < params.short_haul_nm) stats->kept_short_haul -= r.departures;
            }
            continue;
        }
        usable.push_back(r);
    }
    return usable;
}

EmissionsLedger build_ledger(std::span<const FlightRecord> records, const CurveSet& curves,
                             const GridTable& grids, const ModelParameters& params,
                             FilterStats* stats, Execution exec) {
    auto with_grid = attach_grid(records, grids, params, stats);

    // canonical order: chunked or shuffled input folds identically
    std::vector<const FlightRecord*> usable(with_grid.size());
    for (size_t i = 0; i < with_grid.size(); ++i) usable[i] = &with_grid[i];
    std::sort(usable.begin(), usable.end(),
              [](const FlightRecord* a, const FlightRecord* b) { return canonical_less(*a, *b); });

    std::vector<Contribution> contrib(usable.size());
    auto compute_one = [&](size_t i) {
        const FlightRecord& r = *usable[i];
        const double n = static_cast<double>(r.departures);
        Contribution c;
        c.miles = r.distance_nm * n;
        c.fuel_g = curves.fuel_at(r.aircraft_code).predict(r.distance_nm) * n *
                   params.ci_fuel_kg_per_kg * 1000.0;
        c.energy_wh = curves.electric_at(r.aircraft_code).predict(r.distance_nm) * n;
        c.departures = r.departures;
        contrib[i] = c;
    };

#ifdef _OPENMP
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(usable.size()); ++i)
            compute_one(static_cast<size_t>(i));
    } else
#else
    (void)exec;
#endif
    {
        for (size_t i = 0; i < usable.size(); ++i) compute_one(i);
    }

    // country -> contribution indices, already in canonical order
    std::map<std::string, std::vector<size_t>> by_country;
    for (size_t i = 0; i < usable.size(); ++i)
        by_country[usable[i]->origin_country].push_back(i);

    std::vector<CountryLedgerRow> rows;
    rows.reserve(by_country.size());
    for (const auto& [country, idx] : by_country) {
        const GridProfile* g = grids.find(country);
        CountryLedgerRow row;
        row.country = country;
        row.continent = g->continent;
        row.intensity_g_per_kwh = g->intensity_g_per_kwh;
        double fuel_g = 0;
        for (size_t i : idx) {
            row.miles_nm += contrib[i].miles;
            fuel_g += contrib[i].fuel_g;
            row.electric_energy_wh += contrib[i].energy_wh;
            row.flights += contrib[i].departures;
        }
        row.fuel_emissions_kg = fuel_g / 1000.0;
        row.electric_emissions_kg =
            row.electric_energy_wh / 1000.0 * row.intensity_g_per_kwh / 1000.0;
        row.savings_kg = row.fuel_emissions_kg - row.electric_emissions_kg;
        if (!(row.electric_energy_wh > 0))
            throw InvariantError("zero electric energy for country '" + country + "'");
        row.tipping_g_per_kwh = fuel_g / (row.electric_energy_wh / 1000.0);
        row.from_flight_detail = true;
        rows.push_back(std::move(row));
    }
    return EmissionsLedger(std::move(rows));
}

EmissionsLedger load_country_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        csv::split(line) != std::vector<std::string_view>{"country", "continent",
                                                          "intensity_g_per_kwh",
                                                          "tipping_g_per_kwh", "miles_nm",
                                                          "savings_kg"})
        throw ValidationError(
            "country table: expected header "
            "'country,continent,intensity_g_per_kwh,tipping_g_per_kwh,miles_nm,savings_kg'");
    std::vector<CountryLedgerRow> rows;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::is_comment_or_blank(line)) continue;
        auto f = csv::split(line);
        if (f.size() != 6)
            throw ValidationError("line " + std::to_string(line_no) + ": expected 6 fields");
        CountryLedgerRow r;
        r.country = std::string(f[0]);
        r.continent = std::string(f[1]);
        r.intensity_g_per_kwh = csv::parse_double(f[2], "intensity_g_per_kwh", line_no);
        r.tipping_g_per_kwh = csv::parse_double(f[3], "tipping_g_per_kwh", line_no);
        r.miles_nm = csv::parse_double(f[4], "miles_nm", line_no);
        r.savings_kg = csv::parse_double(f[5], "savings_kg", line_no);
        r.from_flight_detail = false;
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw ValidationError("country table: no rows");
    return EmissionsLedger(std::move(rows));
}

EmissionsLedger load_country_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open country table: " + path);
    return load_country_table(in);
}

namespace {

GroupCell make_cell(std::span<const CountryLedgerRow* const> rows) {
    GroupCell c;
    double intensity_sum = 0;
    for (const auto* r : rows) {
        c.miles_nm += r->miles_nm;
        c.savings_kg += r->savings_kg;
        intensity_sum += r->intensity_g_per_kwh;
        c.countries++;
    }
    if (c.countries) c.avg_intensity_g_per_kwh = intensity_sum / c.countries;
    if (c.miles_nm > 0) c.savings_per_mile_kg = c.savings_kg / c.miles_nm;
    return c;
}

}  // namespace

AggregateSummary aggregate(const EmissionsLedger& ledger, double dirty_comparator_g_per_kwh) {
    std::map<std::string, std::vector<const CountryLedgerRow*>> by_continent;
    std::vector<const CountryLedgerRow*> all;
    for (const auto& r : ledger.rows()) {
        by_continent[r.continent].push_back(&r);
        all.push_back(&r);
    }

    AggregateSummary s;
    for (const auto& [continent, rows] : by_continent) {
        ContinentSummary cs;
        cs.continent = continent;
        std::vector<const CountryLedgerRow*> clean, dirty;
        for (const auto* r : rows)
            (classify(r->intensity_g_per_kwh, dirty_comparator_g_per_kwh) == GridClass::Dirty
                 ? dirty
                 : clean)
                .push_back(r);
        cs.aggregate = make_cell(rows);
        cs.clean = make_cell(clean);
        cs.dirty = make_cell(dirty);
        s.continents.push_back(std::move(cs));
    }
    s.global = make_cell(all);
    s.global_net_kg = s.global.savings_kg;
    return s;
}

std::vector<CountryLedgerRow> rank(const EmissionsLedger& ledger, RankKey key,
                                   const std::string& continent_filter) {
    std::vector<CountryLedgerRow> rows;
    for (const auto& r : ledger.rows())
        if (continent_filter.empty() || r.continent == continent_filter) rows.push_back(r);
    std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
        double ka = key == RankKey::Savings ? a.savings_kg : a.miles_nm;
        double kb = key == RankKey::Savings ? b.savings_kg : b.miles_nm;
        if (ka != kb) return ka > kb;
        return a.country < b.country;
    });
    return rows;
}

ScenarioResult improvement_scenario(const CountryLedgerRow& row, double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw ValidationError("improvement fraction must lie in [0, 1]");

    double electric_kg = 0;
    if (row.from_flight_detail) {
        electric_kg = row.electric_emissions_kg;
    } else {
        // recover: savings = energy_kwh * (tipping - intensity) / 1000
        const double denom = row.tipping_g_per_kwh - row.intensity_g_per_kwh;
        if (denom == 0.0)
            throw ValidationError("degenerate recovery for '" + row.country +
                                  "': intensity equals tipping point");
        const double energy_kwh = 1000.0 * row.savings_kg / denom;
        electric_kg = energy_kwh * row.intensity_g_per_kwh / 1000.0;
    }

    ScenarioResult r;
    r.country = row.country;
    r.improvement_fraction = fraction;
    r.absolute_delta_kg = fraction * electric_kg;
    if (fraction > 0 && row.savings_kg == 0)
        throw ValidationError("relative scenario change undefined for zero savings in '" +
                              row.country + "'");
    r.relative_delta_pct =
        fraction == 0 ? 0.0 : 100.0 * r.absolute_delta_kg / std::abs(row.savings_kg);
    return r;
}

namespace {

// Aircraft-composition view of one country: per-aircraft flight and mile
// fractions plus totals, so flights and distance can be substituted while
// composition is held fixed (SI-style F_i / G_i model).
struct CompositionModel {
    std::vector<std::string> codes;
    std::vector<double> flight_frac;  // F_i
    std::vector<double> mile_frac;    // G_i
    double total_flights = 0;
    double total_miles = 0;

    static CompositionModel of(const CountryFlights& cf) {
        CompositionModel m;
        std::map<std::string, std::pair<double, double>> agg;  // code -> (flights, miles)
        for (const auto& l : cf.legs) {
            auto& a = agg[l.aircraft_code];
            a.first += static_cast<double>(l.departures);
            a.second += l.distance_nm * static_cast<double>(l.departures);
            m.total_flights += static_cast<double>(l.departures);
            m.total_miles += l.distance_nm * static_cast<double>(l.departures);
        }
        if (!(m.total_flights > 0) || !(m.total_miles > 0))
            throw ValidationError("decomposition needs positive flights and miles");
        for (const auto& [code, fm] : agg) {
            m.codes.push_back(code);
            m.flight_frac.push_back(fm.first / m.total_flights);
            m.mile_frac.push_back(fm.second / m.total_miles);
        }
        return m;
    }

    double savings_kg(double flights, double miles, double intensity, const CurveSet& curves,
                      const ModelParameters& params) const {
        double fuel_kg = 0, energy_wh = 0;
        for (size_t i = 0; i < codes.size(); ++i) {
            const auto& fc = curves.fuel_at(codes[i]);
            const auto& ec = curves.electric_at(codes[i]);
            const double leg_miles = mile_frac[i] * miles;
            const double leg_flights = flight_frac[i] * flights;
            fuel_kg += fc.slope_kg_per_nm * leg_miles + fc.intercept_kg * leg_flights;
            energy_wh += ec.slope_wh_per_nm * leg_miles + ec.intercept_wh * leg_flights;
        }
        return fuel_kg * params.ci_fuel_kg_per_kg - energy_wh / 1000.0 * intensity / 1000.0;
    }
};

}  // namespace

DecompositionResult decompose_pair(const CountryFlights& a, double intensity_a,
                                   const CountryFlights& b, double intensity_b,
                                   const CurveSet& curves, const ModelParameters& params) {
    const auto ma = CompositionModel::of(a);
    const auto mb = CompositionModel::of(b);

    const double tip_a = tipping_point_g_per_kwh(a, curves, params);
    const double tip_b = tipping_point_g_per_kwh(b, curves, params);

    const double savings_a =
        ma.savings_kg(ma.total_flights, ma.total_miles, intensity_a, curves, params);
    const double savings_b =
        mb.savings_kg(mb.total_flights, mb.total_miles, intensity_b, curves, params);

    // project A's relative tipping-point offset onto B; mirror across the
    // tipping point when A and B sit on opposite sides of it
    const double offset = intensity_a / tip_a - 1.0;
    const bool opposite = (savings_a < 0) != (savings_b < 0);
    const double ci_counterfactual = tip_b * (opposite ? 1.0 - offset : 1.0 + offset);

    const double m0 = std::abs(savings_b);
    const double m1 = std::abs(
        mb.savings_kg(mb.total_flights, mb.total_miles, ci_counterfactual, curves, params));
    const double m2 = std::abs(
        mb.savings_kg(ma.total_flights, mb.total_miles, ci_counterfactual, curves, params));
    const double m3 = std::abs(
        mb.savings_kg(ma.total_flights, ma.total_miles, ci_counterfactual, curves, params));
    const double target = std::abs(savings_a);

    DecompositionResult r;
    r.country_a = a.country;
    r.country_b = b.country;
    r.counterfactual_intensity_g_per_kwh = ci_counterfactual;
    r.gap_kg = m0 - target;
    r.grid_kg = m0 - m1;
    r.flights_kg = m1 - m2;
    r.distance_kg = m2 - m3;
    // composition closes the gap exactly (equals m3 - target up to fp noise)
    r.composition_kg = r.gap_kg - r.grid_kg - r.flights_kg - r.distance_kg;
    if (r.gap_kg != 0.0) {
        r.grid_pct = 100.0 * r.grid_kg / r.gap_kg;
        r.flights_pct = 100.0 * r.flights_kg / r.gap_kg;
        r.distance_pct = 100.0 * r.distance_kg / r.gap_kg;
        r.composition_pct = 100.0 * r.composition_kg / r.gap_kg;
    }
    return r;
}

}  // namespace eflight
