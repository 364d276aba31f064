#include "eflight/schedule.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include "eflight/csv.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eflight {

std::string_view to_string(ServiceClass c) {
    switch (c) {
        case ServiceClass::PassengerFlight: return "passenger_flight";
        case ServiceClass::Limo: return "limo";
        case ServiceClass::Bus: return "bus";
        case ServiceClass::Train: return "train";
        case ServiceClass::Helicopter: return "helicopter";
        case ServiceClass::RoadFeeder: return "road_feeder";
        case ServiceClass::Freighter: return "freighter";
    }
    throw InvariantError("unhandled service class");
}

ServiceClass service_class_from_string(std::string_view s) {
    for (auto c : {ServiceClass::PassengerFlight, ServiceClass::Limo, ServiceClass::Bus,
                   ServiceClass::Train, ServiceClass::Helicopter, ServiceClass::RoadFeeder,
                   ServiceClass::Freighter})
        if (s == to_string(c)) return c;
    throw ValidationError("unknown service class: '" + std::string(s) + "'");
}

IngestResult ingest(std::istream& in) {
    static const std::vector<std::string_view> kHeader = {
        "record_id", "service_class", "aircraft_code", "origin_airport",
        "origin_country", "destination_airport", "distance_nm", "departures"};

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("schedule: unreadable or empty source");
    if (csv::split(line) != kHeader)
        throw ValidationError("schedule: header mismatch, expected "
                              "'record_id,service_class,aircraft_code,origin_airport,"
                              "origin_country,destination_airport,distance_nm,departures'");

    IngestResult out;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::is_comment_or_blank(line)) continue;
        try {
            auto f = csv::split(line);
            if (f.size() != kHeader.size())
                throw ValidationError("line " + std::to_string(line_no) + ": expected 8 fields, got " +
                                      std::to_string(f.size()));
            RawRecord r;
            r.record_id = static_cast<std::uint64_t>(csv::parse_int(f[0], "record_id", line_no));
            r.service_class = service_class_from_string(f[1]);
            r.aircraft_code = std::string(f[2]);
            r.origin_airport = std::string(f[3]);
            r.origin_country = std::string(f[4]);
            r.destination_airport = std::string(f[5]);
            r.distance_nm = csv::parse_double(f[6], "distance_nm", line_no);
            r.departures = csv::parse_int(f[7], "departures", line_no);
            if (r.departures < 1)
                throw ValidationError("line " + std::to_string(line_no) + ": departures must be >= 1");
            if (r.service_class == ServiceClass::PassengerFlight && !(r.distance_nm > 0))
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": flight rows need positive distance");
            out.records.push_back(std::move(r));
        } catch (const ValidationError& e) {
            out.diagnostics.push_back({line_no, e.what()});
        }
    }
    return out;
}

IngestResult ingest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open schedule file: " + path);
    return ingest(in);
}

FilterStats& FilterStats::operator+=(const FilterStats& o) {
    total_in += o.total_in;
    limo += o.limo;
    bus += o.bus;
    train += o.train;
    helicopter += o.helicopter;
    road_feeder += o.road_feeder;
    freighter += o.freighter;
    uncommon_model += o.uncommon_model;
    no_fuel_data += o.no_fuel_data;
    ambiguous_label += o.ambiguous_label;
    no_grid_data += o.no_grid_data;
    kept += o.kept;
    kept_short_haul += o.kept_short_haul;
    return *this;
}

nlohmann::json FilterStats::to_json() const {
    return {{"total_in", total_in},
            {"excluded",
             {{"limo", limo},
              {"bus", bus},
              {"train", train},
              {"helicopter", helicopter},
              {"road_feeder", road_feeder},
              {"freighter", freighter},
              {"uncommon_model", uncommon_model},
              {"no_fuel_data", no_fuel_data},
              {"ambiguous_label", ambiguous_label},
              {"no_grid_data", no_grid_data}}},
            {"kept", kept},
            {"kept_short_haul", kept_short_haul}};
}

std::unordered_set<std::string> LabelLists::load_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open label list file: " + path);
    std::unordered_set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.insert(line);
    }
    return out;
}

namespace {

// Classifies one record and updates stats; appends to `kept` when commercial.
void filter_one(const RawRecord& r, const AircraftRegistry& registry, const LabelLists& lists,
                double short_haul_nm, std::vector<FlightRecord>& kept, FilterStats& s) {
    s.total_in += r.departures;
    switch (r.service_class) {
        case ServiceClass::Limo: s.limo += r.departures; return;
        case ServiceClass::Bus: s.bus += r.departures; return;
        case ServiceClass::Train: s.train += r.departures; return;
        case ServiceClass::Helicopter: s.helicopter += r.departures; return;
        case ServiceClass::RoadFeeder: s.road_feeder += r.departures; return;
        case ServiceClass::Freighter: s.freighter += r.departures; return;
        case ServiceClass::PassengerFlight: break;
    }
    if (lists.uncommon_models.count(r.aircraft_code)) {
        s.uncommon_model += r.departures;
        return;
    }
    if (!registry.contains(r.aircraft_code)) {
        if (lists.ambiguous_labels.count(r.aircraft_code))
            s.ambiguous_label += r.departures;
        else
            s.no_fuel_data += r.departures;
        return;
    }
    s.kept += r.departures;
    if (r.distance_nm < short_haul_nm) s.kept_short_haul += r.departures;
    kept.push_back({r.record_id, r.aircraft_code, r.origin_country, r.distance_nm, r.departures});
}

}  // namespace

FilterResult filter_commercial(std::span<const RawRecord> records,
                               const AircraftRegistry& registry, const LabelLists& lists,
                               double short_haul_nm, Execution exec) {
    FilterResult out;

#ifdef _OPENMP
    if (exec == Execution::Parallel && records.size() > 1024) {
        // fixed-size chunks merged in chunk order: identical to the serial pass
        const size_t chunk = 16384;
        const size_t nchunks = (records.size() + chunk - 1) / chunk;
        std::vector<std::vector<FlightRecord>> kept(nchunks);
        std::vector<FilterStats> stats(nchunks);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c) {
            const size_t begin = static_cast<size_t>(c) * chunk;
            const size_t end = std::min(records.size(), begin + chunk);
            for (size_t i = begin; i < end; ++i)
                filter_one(records[i], registry, lists, short_haul_nm, kept[c], stats[c]);
        }
        for (size_t c = 0; c < nchunks; ++c) {
            out.stats += stats[c];
            out.kept.insert(out.kept.end(), kept[c].begin(), kept[c].end());
        }
        return out;
    }
#else
    (void)exec;
#endif

    for (const auto& r : records)
        filter_one(r, registry, lists, short_haul_nm, out.kept, out.stats);
    return out;
}

std::vector<FlightRecord> short_haul(std::span<const FlightRecord> records, double threshold_nm) {
    if (!(threshold_nm >= 0)) throw ValidationError("short-haul threshold must be non-negative");
    std::vector<FlightRecord> out;
    for (const auto& r : records)
        if (r.distance_nm < threshold_nm) out.push_back(r);
    return out;
}

DeploymentStats deployment_stats(std::span<const FlightRecord> records,
                                 const std::set<std::string>& model_set) {
    DeploymentStats s;
    for (const auto& r : records) {
        s.total_flights += r.departures;
        if (model_set.count(r.aircraft_code)) s.flights += r.departures;
        s.miles[{r.aircraft_code, r.origin_country}] +=
            r.distance_nm * static_cast<double>(r.departures);
    }
    s.share = s.total_flights ? static_cast<double>(s.flights) / static_cast<double>(s.total_flights)
                              : 0.0;
    return s;
}

double great_circle_nm(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg) {
    for (double lat : {lat1_deg, lat2_deg})
        if (std::abs(lat) > 90.0) throw ValidationError("latitude out of range");
    for (double lon : {lon1_deg, lon2_deg})
        if (std::abs(lon) > 180.0) throw ValidationError("longitude out of range");

    constexpr double kEarthRadiusKm = 6371.0;
    constexpr double kKmPerNm = 1.852;
    constexpr double kDeg = 3.14159265358979323846 / 180.0;

    const double phi1 = lat1_deg * kDeg;
    const double phi2 = lat2_deg * kDeg;
    const double dphi = (lat2_deg - lat1_deg) * kDeg;
    const double dlam = (lon2_deg - lon1_deg) * kDeg;

    const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                     std::cos(phi1) * std::cos(phi2) * std::sin(dlam / 2) * std::sin(dlam / 2);
    const double km = 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
    return km / kKmPerNm;
}

}  // namespace eflight
