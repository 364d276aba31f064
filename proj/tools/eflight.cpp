#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "eflight/aircraft.hpp"
#include "eflight/corpus.hpp"
#include "eflight/csv.hpp"
#include "eflight/emissions.hpp"
#include "eflight/fuel_curves.hpp"
#include "eflight/params.hpp"
#include "eflight/propulsion.hpp"
#include "eflight/schedule.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eflight;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
    ModelParameters params;
    std::string out_dir = "out";
    std::string format = "csv";
    std::string execution = "parallel";
    int threads = 0;  // 0 = library default
    bool print_config = false;

    // input paths (shared across subcommands; each validates what it needs)
    std::string aircraft_path;
    std::string fuel_points_path;
    std::string schedule_path;
    std::string grid_path;
    std::string country_table_path;
    std::string uncommon_list_path;
    std::string deny_list_path;
    std::string pairs_path;
    std::string aggregates_path;

    Execution exec() const {
        return execution == "serial" ? Execution::Serial : Execution::Parallel;
    }

    json config_json(const std::string& subcommand) const {
        return {{"tool", "eflight"},
                {"version", kVersion},
                {"subcommand", subcommand},
                {"lhv_mj_per_kg", params.lhv_mj_per_kg},
                {"eta_fossil", params.eta_fossil},
                {"eta_electric", params.eta_electric},
                {"wh_per_mj", params.wh_per_mj},
                {"battery_density_wh_per_kg", params.battery_density_wh_per_kg},
                {"pax_mass_kg", params.pax_mass_kg},
                {"ci_fuel_kg_per_kg", params.ci_fuel_kg_per_kg},
                {"short_haul_nm", params.short_haul_nm},
                {"dirty_grid_g_per_kwh", params.dirty_grid_g_per_kwh},
                {"format", format},
                {"execution", execution},
                {"threads", threads}};
    }
};

// Tabular report with a config metadata block; cells are strings, numbers or
// null (rendered as N/A in CSV). Written to temp and renamed so a failed run
// never leaves a partial file.
class Report {
public:
    Report(std::string name, std::vector<std::string> columns)
        : name_(std::move(name)), columns_(std::move(columns)) {}

    void add_row(std::vector<json> cells) {
        if (cells.size() != columns_.size())
            throw InvariantError("report '" + name_ + "': column count mismatch");
        rows_.push_back(std::move(cells));
    }

    fs::path write(const Options& opt, const std::string& subcommand) const {
        fs::create_directories(opt.out_dir);
        const bool as_json = opt.format == "json";
        fs::path target = fs::path(opt.out_dir) / (name_ + (as_json ? ".json" : ".csv"));
        fs::path tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw ValidationError("cannot write output file: " + tmp.string());
            if (as_json)
                write_json(out, opt, subcommand);
            else
                write_csv(out, opt, subcommand);
        }
        fs::rename(tmp, target);
        return target;
    }

private:
    static std::string render_cell(const json& cell) {
        if (cell.is_null()) return "N/A";
        if (cell.is_string()) return cell.get<std::string>();
        if (cell.is_number_integer()) return std::to_string(cell.get<std::int64_t>());
        if (cell.is_number()) return csv::format_number(cell.get<double>());
        return cell.dump();
    }

    void write_csv(std::ostream& out, const Options& opt, const std::string& subcommand) const {
        out << "# eflight " << kVersion << " " << name_ << "\n";
        out << "# config " << opt.config_json(subcommand).dump() << "\n";
        for (size_t i = 0; i < columns_.size(); ++i)
            out << columns_[i] << (i + 1 == columns_.size() ? '\n' : ',');
        for (const auto& row : rows_) {
            for (size_t i = 0; i < row.size(); ++i)
                out << render_cell(row[i]) << (i + 1 == row.size() ? '\n' : ',');
        }
    }

    void write_json(std::ostream& out, const Options& opt, const std::string& subcommand) const {
        json j{{"report", name_},
               {"config", opt.config_json(subcommand)},
               {"columns", columns_},
               {"rows", rows_}};
        out << j.dump(2) << "\n";
    }

    std::string name_;
    std::vector<std::string> columns_;
    std::vector<std::vector<json>> rows_;
};

void write_json_file(const Options& opt, const std::string& name, const json& j) {
    fs::create_directories(opt.out_dir);
    fs::path target = fs::path(opt.out_dir) / name;
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ValidationError("cannot write output file: " + tmp.string());
        out << j.dump(2) << "\n";
    }
    fs::rename(tmp, target);
}

void require(const std::string& value, const char* flag) {
    if (value.empty())
        throw ValidationError(std::string("missing required input: ") + flag);
}

void write_curves_report(const Options& opt, const CurveSet& curves,
                         const std::string& subcommand) {
    Report report("curves", {"code", "slope_kg_per_nm", "intercept_kg", "slope_wh_per_nm",
                             "intercept_wh", "fit_points", "rmse_kg"});
    for (size_t i = 0; i < curves.size(); ++i) {
        const auto& f = curves.fuel_curves()[i];
        const auto& e = curves.electric_curves()[i];
        report.add_row({f.code, f.slope_kg_per_nm, f.intercept_kg, e.slope_wh_per_nm,
                        e.intercept_wh, static_cast<std::int64_t>(f.fit_points), f.rmse_kg});
    }
    report.write(opt, subcommand);
}

LabelLists load_lists(const Options& opt) {
    LabelLists lists;
    if (!opt.uncommon_list_path.empty())
        lists.uncommon_models = LabelLists::load_list_file(opt.uncommon_list_path);
    if (!opt.deny_list_path.empty())
        lists.ambiguous_labels = LabelLists::load_list_file(opt.deny_list_path);
    return lists;
}

// Shared schedule pipeline: ingest -> filter -> (short haul) -> ledger.
struct PipelineResult {
    EmissionsLedger ledger{std::vector<CountryLedgerRow>{}};
    FilterStats stats;
    std::size_t parse_diagnostics = 0;
};

PipelineResult run_schedule_pipeline(const Options& opt, bool restrict_short_haul) {
    require(opt.schedule_path, "--schedule");
    require(opt.aircraft_path, "--aircraft");
    require(opt.fuel_points_path, "--fuel-points");
    require(opt.grid_path, "--grid");

    auto registry = AircraftRegistry::load_file(opt.aircraft_path);
    auto curves = CurveSet::fit_from_points_file(opt.fuel_points_path, opt.params);
    auto grids = GridTable::load_file(opt.grid_path);
    auto lists = load_lists(opt);

    auto in = ingest_file(opt.schedule_path);
    for (const auto& d : in.diagnostics)
        std::cerr << "schedule row skipped: " << d.message << "\n";

    auto filtered =
        filter_commercial(in.records, registry, lists, opt.params.short_haul_nm, opt.exec());

    PipelineResult r;
    r.stats = filtered.stats;
    // grid attachment applies to every kept flight, before any distance cut,
    // so the reported stats are independent of the short-haul restriction
    auto with_grid = attach_grid(filtered.kept, grids, opt.params, &r.stats);
    std::vector<FlightRecord> records =
        restrict_short_haul ? short_haul(with_grid, opt.params.short_haul_nm)
                            : std::move(with_grid);
    r.ledger = build_ledger(records, curves, grids, opt.params, nullptr, opt.exec());
    r.parse_diagnostics = in.diagnostics.size();
    return r;
}

EmissionsLedger obtain_ledger(const Options& opt, FilterStats* stats_out,
                              bool restrict_short_haul) {
    if (!opt.country_table_path.empty())
        return load_country_table_file(opt.country_table_path);
    auto r = run_schedule_pipeline(opt, restrict_short_haul);
    if (stats_out) *stats_out = r.stats;
    return r.ledger;
}

int cmd_exceedance(const Options& opt, LimitKind limit) {
    require(opt.aircraft_path, "--aircraft");
    auto registry = AircraftRegistry::load_file(opt.aircraft_path);

    Report report("exceedance",
                  {"code", "category", "battery_mass_kg", "landing_mass_kg", "limit_kind", "ratio",
                   "battery_share", "requisite_density_wh_kg"});
    for (const auto& m : registry.models()) {
        auto e = exceedance(m, opt.params, limit);
        json density;
        try {
            density = requisite_density(m, opt.params, limit);
        } catch (const ValidationError&) {
            density = nullptr;  // structurally impossible at this limit
        }
        report.add_row({m.code, std::string(to_string(m.category)), e.battery_mass_kg,
                        e.landing_mass_kg, std::string(to_string(limit)), e.ratio,
                        e.battery_share, density});
    }
    auto path = report.write(opt, "exceedance");

    auto summary = category_summary(registry, [&](const AircraftModel& m) {
        return exceedance(m, opt.params, limit).ratio;
    });
    std::cout << "wrote " << path.string() << " (" << registry.size() << " aircraft)\n";
    for (auto c : kAllCategories)
        std::cout << "  mean exceedance " << to_string(c) << ": "
                  << csv::format_number(summary.category_mean[static_cast<size_t>(c)]) << "\n";
    std::cout << "  mean exceedance fleet: " << csv::format_number(summary.overall_mean) << "\n";
    return 0;
}

int cmd_density(const Options& opt) {
    require(opt.aircraft_path, "--aircraft");
    auto registry = AircraftRegistry::load_file(opt.aircraft_path);

    Report report("density",
                  {"code", "category", "requisite_mlw_wh_kg", "requisite_mtow_wh_kg"});
    for (const auto& m : registry.models())
        report.add_row({m.code, std::string(to_string(m.category)),
                        requisite_density(m, opt.params, LimitKind::Mlw),
                        requisite_density(m, opt.params, LimitKind::Mtow)});
    report.write(opt, "density");

    auto mlw = category_summary(registry, [&](const AircraftModel& m) {
        return requisite_density(m, opt.params, LimitKind::Mlw);
    });
    auto mtow = category_summary(registry, [&](const AircraftModel& m) {
        return requisite_density(m, opt.params, LimitKind::Mtow);
    });
    Report summary("density_summary", {"group", "requisite_mlw_wh_kg", "requisite_mtow_wh_kg"});
    for (auto c : kAllCategories)
        summary.add_row({std::string(to_string(c)),
                         mlw.category_mean[static_cast<size_t>(c)],
                         mtow.category_mean[static_cast<size_t>(c)]});
    summary.add_row({"fleet", mlw.overall_mean, mtow.overall_mean});
    auto path = summary.write(opt, "density");
    std::cout << "wrote " << path.string() << "; fleet mean mlw "
              << csv::format_number(mlw.overall_mean) << " Wh/kg, mtow "
              << csv::format_number(mtow.overall_mean) << " Wh/kg\n";
    return 0;
}

int cmd_sensitivity(const Options& opt) {
    require(opt.aircraft_path, "--aircraft");
    auto registry = AircraftRegistry::load_file(opt.aircraft_path);

    Report report("sensitivity", {"code", "parameter", "new_ratio", "relative_change_pct"});
    for (const auto& m : registry.models())
        for (const auto& row : sensitivity_table(m, opt.params))
            report.add_row({m.code, std::string(to_string(row.parameter)), row.new_ratio,
                            row.relative_change_pct});
    auto path = report.write(opt, "sensitivity");
    std::cout << "wrote " << path.string() << " (" << registry.size() * 5 << " rows)\n";
    return 0;
}

int cmd_ingest(const Options& opt) {
    require(opt.schedule_path, "--schedule");
    require(opt.aircraft_path, "--aircraft");
    auto registry = AircraftRegistry::load_file(opt.aircraft_path);
    auto lists = load_lists(opt);

    auto in = ingest_file(opt.schedule_path);
    Report diags("ingest_diagnostics", {"line", "message"});
    for (const auto& d : in.diagnostics)
        diags.add_row({static_cast<std::int64_t>(d.line), d.message});
    diags.write(opt, "ingest");

    auto filtered =
        filter_commercial(in.records, registry, lists, opt.params.short_haul_nm, opt.exec());
    if (!filtered.stats.conserved())
        throw InvariantError("filter stats do not conserve counts");
    write_json_file(opt, "filter_stats.json", filtered.stats.to_json());
    std::cout << "parsed " << in.records.size() << " rows (" << in.diagnostics.size()
              << " diagnostics), kept " << filtered.stats.kept << " of "
              << filtered.stats.total_in << " flights\n";
    return 0;
}

json cell_or_na(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

void write_ledger_reports(const Options& opt, const EmissionsLedger& ledger,
                          const std::string& subcommand) {
    Report countries("country_emissions",
                     {"country", "continent", "miles_nm", "flights", "fuel_emissions_kg",
                      "electric_energy_wh", "electric_emissions_kg", "savings_kg",
                      "tipping_g_per_kwh", "intensity_g_per_kwh", "classification"});
    for (const auto& r : ledger.rows()) {
        json fuel = r.from_flight_detail ? json(r.fuel_emissions_kg) : json(nullptr);
        json energy = r.from_flight_detail ? json(r.electric_energy_wh) : json(nullptr);
        json electric = r.from_flight_detail ? json(r.electric_emissions_kg) : json(nullptr);
        json flights = r.from_flight_detail ? json(r.flights) : json(nullptr);
        countries.add_row(
            {r.country, r.continent, r.miles_nm, flights, fuel, energy, electric, r.savings_kg,
             r.tipping_g_per_kwh, r.intensity_g_per_kwh,
             std::string(to_string(
                 classify(r.intensity_g_per_kwh, opt.params.dirty_grid_g_per_kwh)))});
    }
    countries.write(opt, subcommand);

    auto summary = aggregate(ledger, opt.params.dirty_grid_g_per_kwh);
    Report continents("continent_summary",
                      {"continent", "group", "countries", "miles_nm",
                       "avg_intensity_g_per_kwh", "savings_kg", "savings_per_mile_kg"});
    for (const auto& c : summary.continents) {
        auto emit = [&](const char* group, const GroupCell& cell) {
            continents.add_row({c.continent, group, cell.countries, cell.miles_nm,
                                cell_or_na(cell.avg_intensity_g_per_kwh), cell.savings_kg,
                                cell_or_na(cell.savings_per_mile_kg)});
        };
        emit("aggregate", c.aggregate);
        emit("clean", c.clean);
        emit("dirty", c.dirty);
    }
    continents.add_row({"Global", "aggregate", summary.global.countries, summary.global.miles_nm,
                        cell_or_na(summary.global.avg_intensity_g_per_kwh),
                        summary.global.savings_kg, cell_or_na(summary.global.savings_per_mile_kg)});
    continents.write(opt, subcommand);

    std::cout << "global net savings: " << csv::format_number(summary.global_net_kg) << " kg\n";
}

void write_fig3b(const Options& opt, const EmissionsLedger& ledger,
                 const std::string& subcommand) {
    Report fig("fig3b", {"country", "intensity_g_per_kwh", "ln_miles", "savings_kg",
                         "classification"});
    for (const auto& r : ledger.rows()) {
        json ln_miles = r.miles_nm > 0 ? json(std::log(r.miles_nm)) : json(nullptr);
        fig.add_row({r.country, r.intensity_g_per_kwh, ln_miles, r.savings_kg,
                     std::string(to_string(
                         classify(r.intensity_g_per_kwh, opt.params.dirty_grid_g_per_kwh)))});
    }
    fig.write(opt, subcommand);
}

int cmd_emissions(const Options& opt, bool all_distances) {
    if (!opt.country_table_path.empty()) {
        auto ledger = load_country_table_file(opt.country_table_path);
        write_ledger_reports(opt, ledger, "emissions");
        write_fig3b(opt, ledger, "emissions");
        return 0;
    }
    auto r = run_schedule_pipeline(opt, !all_distances);
    if (!r.stats.conserved()) throw InvariantError("filter stats do not conserve counts");
    write_json_file(opt, "filter_stats.json", r.stats.to_json());
    write_curves_report(opt, CurveSet::fit_from_points_file(opt.fuel_points_path, opt.params),
                        "emissions");
    write_ledger_reports(opt, r.ledger, "emissions");
    write_fig3b(opt, r.ledger, "emissions");
    return 0;
}

int cmd_tipping(const Options& opt) {
    require(opt.fuel_points_path, "--fuel-points");
    auto curves = CurveSet::fit_from_points_file(opt.fuel_points_path, opt.params);
    write_curves_report(opt, curves, "tipping");

    Report report("tipping", {"country", "fuel_emissions_kg", "electric_energy_wh",
                              "tipping_g_per_kwh"});
    std::vector<CountryFlights> groups;

    if (!opt.aggregates_path.empty()) {
        std::ifstream in(opt.aggregates_path);
        if (!in) throw ValidationError("cannot open aggregates file: " + opt.aggregates_path);
        std::string line;
        if (!std::getline(in, line) ||
            csv::split(line) != std::vector<std::string_view>{"country", "aircraft_code",
                                                              "flights", "miles_nm"})
            throw ValidationError(
                "aggregates file: expected header 'country,aircraft_code,flights,miles_nm'");
        size_t line_no = 1;
        std::vector<std::string> order;
        std::map<std::string, std::vector<std::tuple<std::string, std::int64_t, double>>> agg;
        while (std::getline(in, line)) {
            ++line_no;
            if (csv::is_comment_or_blank(line)) continue;
            auto f = csv::split(line);
            if (f.size() != 4)
                throw ValidationError("line " + std::to_string(line_no) + ": expected 4 fields");
            std::string country(f[0]);
            if (agg.find(country) == agg.end()) order.push_back(country);
            agg[country].emplace_back(std::string(f[1]), csv::parse_int(f[2], "flights", line_no),
                                      csv::parse_double(f[3], "miles_nm", line_no));
        }
        for (const auto& c : order)
            groups.push_back(CountryFlights::from_aggregates(c, agg[c]));
    } else {
        require(opt.schedule_path, "--schedule (or --aggregates)");
        require(opt.aircraft_path, "--aircraft");
        auto registry = AircraftRegistry::load_file(opt.aircraft_path);
        auto lists = load_lists(opt);
        auto in = ingest_file(opt.schedule_path);
        auto filtered =
            filter_commercial(in.records, registry, lists, opt.params.short_haul_nm, opt.exec());
        auto records = short_haul(filtered.kept, opt.params.short_haul_nm);
        std::map<std::string, CountryFlights> by_country;
        for (const auto& rec : records) {
            auto& cf = by_country[rec.origin_country];
            cf.country = rec.origin_country;
            cf.legs.push_back({rec.aircraft_code, rec.distance_nm, rec.departures});
        }
        for (auto& [_, cf] : by_country) groups.push_back(std::move(cf));
    }

    for (const auto& cf : groups) {
        double fuel = fuel_emissions_kg(cf, curves, opt.params);
        double energy = 0;
        for (const auto& l : cf.legs)
            energy += curves.electric_at(l.aircraft_code).predict(l.distance_nm) *
                      static_cast<double>(l.departures);
        report.add_row({cf.country, fuel, energy, tipping_point_g_per_kwh(cf, curves, opt.params)});
    }
    auto path = report.write(opt, "tipping");
    std::cout << "wrote " << path.string() << " (" << groups.size() << " countries); "
              << "constant tipping at exact-scaled curves: "
              << csv::format_number(opt.params.constant_tipping_g_per_kwh()) << " g/kWh\n";
    return 0;
}

int cmd_scenarios(const Options& opt, double fraction) {
    auto ledger = obtain_ledger(opt, nullptr, true);
    Report report("scenario", {"country", "improvement_fraction", "absolute_delta_kg",
                               "relative_delta_pct"});
    for (const auto& r : ledger.rows()) {
        auto s = improvement_scenario(r, fraction);
        report.add_row({s.country, s.improvement_fraction, s.absolute_delta_kg,
                        s.relative_delta_pct});
    }
    auto path = report.write(opt, "scenarios");
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_rank(const Options& opt, const std::string& key, const std::string& continent) {
    auto ledger = obtain_ledger(opt, nullptr, true);
    auto ranked = rank(ledger, key == "miles" ? RankKey::Miles : RankKey::Savings, continent);
    Report report("rank", {"position", "country", "continent", "savings_kg", "miles_nm"});
    std::int64_t pos = 0;
    for (const auto& r : ranked)
        report.add_row({++pos, r.country, r.continent, r.savings_kg, r.miles_nm});
    auto path = report.write(opt, "rank");
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_decompose(const Options& opt, const std::string& a, const std::string& b,
                  const std::string& aircraft_code) {
    require(opt.pairs_path, "--pairs");
    require(opt.fuel_points_path, "--fuel-points");
    auto curves = CurveSet::fit_from_points_file(opt.fuel_points_path, opt.params);

    std::ifstream in(opt.pairs_path);
    if (!in) throw ValidationError("cannot open pairs file: " + opt.pairs_path);
    std::string line;
    if (!std::getline(in, line) ||
        csv::split(line) != std::vector<std::string_view>{"country", "flights", "miles_nm",
                                                          "intensity_g_per_kwh"})
        throw ValidationError(
            "pairs file: expected header 'country,flights,miles_nm,intensity_g_per_kwh'");
    struct Row {
        std::int64_t flights;
        double miles, intensity;
    };
    std::map<std::string, Row> rows;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::is_comment_or_blank(line)) continue;
        auto f = csv::split(line);
        if (f.size() != 4)
            throw ValidationError("line " + std::to_string(line_no) + ": expected 4 fields");
        rows[std::string(f[0])] = {csv::parse_int(f[1], "flights", line_no),
                                   csv::parse_double(f[2], "miles_nm", line_no),
                                   csv::parse_double(f[3], "intensity_g_per_kwh", line_no)};
    }
    for (const auto& name : {a, b})
        if (rows.find(name) == rows.end())
            throw ValidationError("pairs file has no row for '" + name + "'");

    auto make = [&](const std::string& name) {
        const auto& r = rows.at(name);
        std::vector<std::tuple<std::string, std::int64_t, double>> agg = {
            {aircraft_code, r.flights, r.miles}};
        return CountryFlights::from_aggregates(name, agg);
    };
    auto cfa = make(a);
    auto cfb = make(b);
    auto d = decompose_pair(cfa, rows.at(a).intensity, cfb, rows.at(b).intensity, curves,
                            opt.params);

    json out{{"country_a", d.country_a},
             {"country_b", d.country_b},
             {"gap_kg", d.gap_kg},
             {"counterfactual_intensity_g_per_kwh", d.counterfactual_intensity_g_per_kwh},
             {"contributions_kg",
              {{"grid", d.grid_kg},
               {"flight_count", d.flights_kg},
               {"distance", d.distance_kg},
               {"composition", d.composition_kg}}},
             {"contributions_pct",
              {{"grid", d.grid_pct},
               {"flight_count", d.flights_pct},
               {"distance", d.distance_pct},
               {"composition", d.composition_pct}}},
             {"config", opt.config_json("decompose")}};
    write_json_file(opt, "decomposition.json", out);
    std::cout << "gap " << csv::format_number(d.gap_kg) << " kg; shares grid "
              << csv::format_number(d.grid_pct) << "%, flights "
              << csv::format_number(d.flights_pct) << "%, distance "
              << csv::format_number(d.distance_pct) << "%, composition "
              << csv::format_number(d.composition_pct) << "%\n";
    return 0;
}

int cmd_figdata(const Options& opt) {
    auto ledger = obtain_ledger(opt, nullptr, true);
    write_fig3b(opt, ledger, "figdata");
    std::cout << "wrote " << (fs::path(opt.out_dir) / ("fig3b." + opt.format)).string() << "\n";
    return 0;
}

int cmd_gen_corpus(const Options& opt, std::int64_t rows, std::uint64_t seed,
                   double short_haul_fraction) {
    require(opt.aircraft_path, "--aircraft");
    require(opt.grid_path, "--grid");
    auto registry = AircraftRegistry::load_file(opt.aircraft_path);
    auto grids = GridTable::load_file(opt.grid_path);

    std::vector<std::string> countries;
    for (const auto& p : grids.profiles()) countries.push_back(p.country);

    CorpusSpec spec;
    spec.seed = seed;
    spec.rows = rows;
    spec.short_haul_fraction = short_haul_fraction;

    fs::create_directories(opt.out_dir);
    fs::path schedule = fs::path(opt.out_dir) / "schedule.csv";
    fs::path tmp = schedule;
    tmp += ".tmp";
    CorpusManifest manifest;
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ValidationError("cannot write corpus file: " + tmp.string());
        manifest = generate_corpus(spec, registry, countries, opt.params.short_haul_nm, out);
    }
    fs::rename(tmp, schedule);
    write_json_file(opt, "manifest.json", manifest.to_json());
    std::cout << "wrote " << schedule.string() << " (" << rows << " rows, seed " << seed << ")\n";
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Short-haul flight electrification: viability and emissions model"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config");
    app.fallthrough();

    Options opt;
    app.add_option("--lhv", opt.params.lhv_mj_per_kg, "Kerosene LHV, MJ/kg");
    app.add_option("--eta-fossil", opt.params.eta_fossil, "Combustion efficiency");
    app.add_option("--eta-electric", opt.params.eta_electric, "Electric efficiency");
    app.add_option("--wh-per-mj", opt.params.wh_per_mj, "Wh per MJ conversion");
    app.add_option("--battery-density", opt.params.battery_density_wh_per_kg,
                   "Battery energy density, Wh/kg");
    app.add_option("--pax-mass", opt.params.pax_mass_kg, "Passenger mass incl. cargo, kg");
    app.add_option("--ci-fuel", opt.params.ci_fuel_kg_per_kg, "Fuel carbon intensity, kgCO2e/kg");
    app.add_option("--short-haul", opt.params.short_haul_nm, "Short-haul threshold, nm (strict)");
    app.add_option("--dirty-grid", opt.params.dirty_grid_g_per_kwh,
                   "Clean/dirty comparator, gCO2e/kWh");
    app.add_option("--out", opt.out_dir, "Output directory");
    app.add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--execution", opt.execution, "Kernel execution mode")
        ->check(CLI::IsMember({"serial", "parallel"}));
    app.add_option("--threads", opt.threads, "Worker pool size (0 = default)");
    app.add_flag("--print-config", opt.print_config, "Print the resolved configuration");

    app.add_option("--aircraft", opt.aircraft_path, "Aircraft table CSV");
    app.add_option("--fuel-points", opt.fuel_points_path, "Fuel observations CSV");
    app.add_option("--schedule", opt.schedule_path, "Schedule feed CSV");
    app.add_option("--grid", opt.grid_path, "Grid intensity CSV");
    app.add_option("--country-table", opt.country_table_path,
                   "Per-country miles/savings table CSV");
    app.add_option("--uncommon-list", opt.uncommon_list_path, "Uncommon aircraft list");
    app.add_option("--deny-list", opt.deny_list_path, "Ambiguous label deny-list");
    app.add_option("--pairs", opt.pairs_path, "Country aggregate pairs CSV");
    app.add_option("--aggregates", opt.aggregates_path, "Per-country aircraft aggregates CSV");

    auto* c_exceedance = app.add_subcommand("exceedance", "Exceedance and requisite density");
    std::string limit = "mlw";
    c_exceedance->add_option("--limit", limit, "Weight limit")
        ->check(CLI::IsMember({"mlw", "mtow"}));

    auto* c_density = app.add_subcommand("density", "Requisite energy densities");
    auto* c_sensitivity = app.add_subcommand("sensitivity", "Parameter sensitivity table");
    auto* c_ingest = app.add_subcommand("ingest", "Parse and filter a schedule feed");

    auto* c_emissions = app.add_subcommand("emissions", "Full emissions ledger");
    bool all_distances = false;
    c_emissions->add_flag("--all-distances", all_distances,
                          "Skip the short-haul restriction");

    auto* c_tipping = app.add_subcommand("tipping", "Per-country tipping points");

    auto* c_scenarios = app.add_subcommand("scenarios", "Grid improvement scenarios");
    double fraction = 0.05;
    c_scenarios->add_option("--fraction", fraction, "Improvement fraction")
        ->check(CLI::Range(0.0, 1.0));

    auto* c_rank = app.add_subcommand("rank", "Rank countries");
    std::string key = "savings", continent;
    c_rank->add_option("--key", key, "Ranking key")->check(CLI::IsMember({"savings", "miles"}));
    c_rank->add_option("--continent", continent, "Restrict to one continent");

    auto* c_decompose = app.add_subcommand("decompose", "Two-country gap decomposition");
    std::string pair_a = "India", pair_b = "Brazil", pair_code = "A320-200";
    c_decompose->add_option("--a", pair_a, "Country A (the emissions increaser)");
    c_decompose->add_option("--b", pair_b, "Country B (the saver)");
    c_decompose->add_option("--aircraft-code", pair_code, "Effective aircraft for aggregates");

    auto* c_figdata = app.add_subcommand("figdata", "Country scatter data (intensity vs miles)");

    auto* c_gen = app.add_subcommand("gen-corpus", "Generate a synthetic schedule corpus");
    std::int64_t rows = 100000;
    std::uint64_t seed = 42;
    double shf = 0.13;
    c_gen->add_option("--rows", rows, "Row count");
    c_gen->add_option("--seed", seed, "RNG seed");
    c_gen->add_option("--short-haul-frac", shf, "Short-haul fraction of kept rows");

    app.require_subcommand(0, 1);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // flag/usage problems are input errors
    }

    opt.params.validate();
#ifdef _OPENMP
    if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif

    if (opt.print_config)
        std::cout << opt.config_json(app.get_subcommands().empty()
                                         ? "none"
                                         : app.get_subcommands()[0]->get_name())
                         .dump(2)
                  << "\n";

    if (c_exceedance->parsed())
        return cmd_exceedance(opt, limit == "mtow" ? LimitKind::Mtow : LimitKind::Mlw);
    if (c_density->parsed()) return cmd_density(opt);
    if (c_sensitivity->parsed()) return cmd_sensitivity(opt);
    if (c_ingest->parsed()) return cmd_ingest(opt);
    if (c_emissions->parsed()) return cmd_emissions(opt, all_distances);
    if (c_tipping->parsed()) return cmd_tipping(opt);
    if (c_scenarios->parsed()) return cmd_scenarios(opt, fraction);
    if (c_rank->parsed()) return cmd_rank(opt, key, continent);
    if (c_decompose->parsed()) return cmd_decompose(opt, pair_a, pair_b, pair_code);
    if (c_figdata->parsed()) return cmd_figdata(opt);
    if (c_gen->parsed()) return cmd_gen_corpus(opt, rows, seed, shf);

    if (!opt.print_config) std::cout << app.help();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvariantError& e) {
        std::cerr << "internal invariant violated: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
