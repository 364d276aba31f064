#include "eflight/aircraft.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "eflight/csv.hpp"

namespace eflight {

std::string_view to_string(AircraftCategory c) {
    switch (c) {
        case AircraftCategory::Turboprop: return "turboprop";
        case AircraftCategory::RegionalJet: return "regional_jet";
        case AircraftCategory::Narrowbody: return "narrowbody";
        case AircraftCategory::Widebody: return "widebody";
    }
    throw InvariantError("unhandled aircraft category");
}

AircraftCategory category_from_string(std::string_view s) {
    for (auto c : kAllCategories)
        if (s == to_string(c)) return c;
    throw ValidationError("unknown aircraft category: '" + std::string(s) + "'");
}

namespace {

constexpr std::array<std::string_view, 8> kColumns = {
    "code", "category", "seats", "empty_kg", "pax_kg", "fuel_200nm_kg", "mtow_kg", "mlw_kg"};

void validate_model(const AircraftModel& m, const std::string& where) {
    auto fail = [&](const std::string& msg) {
        throw ValidationError(where + ": " + msg + " (aircraft '" + m.code + "')");
    };
    if (m.code.empty()) fail("empty aircraft code");
    if (m.seats <= 0) fail("non-positive seat count");
    if (!(m.empty_weight_kg > 0)) fail("non-positive empty weight");
    if (!(m.pax_weight_kg > 0)) fail("non-positive passenger weight");
    if (!(m.fuel_200nm_kg > 0)) fail("non-positive fuel weight");
    if (!(m.mtow_kg > 0)) fail("non-positive MTOW");
    if (!(m.mlw_kg > 0)) fail("non-positive MLW");
    if (m.mlw_kg > m.mtow_kg) fail("MLW exceeds MTOW");
    if (m.empty_weight_kg + m.pax_weight_kg >= m.mtow_kg)
        fail("empty weight plus passengers reaches MTOW");
}

}  // namespace

AircraftRegistry AircraftRegistry::load(std::istream& in) {
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!csv::is_comment_or_blank(line)) break;
    }
    if (line_no == 0 || csv::is_comment_or_blank(line))
        throw ValidationError("aircraft file: no aircraft rows");

    auto header = csv::split(line);
    if (header.size() != kColumns.size())
        throw ValidationError("aircraft file: expected 8 columns, got " +
                              std::to_string(header.size()));
    for (size_t i = 0; i < kColumns.size(); ++i)
        if (header[i] != kColumns[i])
            throw ValidationError("aircraft file: missing column '" + std::string(kColumns[i]) +
                                  "' (found '" + std::string(header[i]) + "')");

    std::vector<AircraftModel> models;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::is_comment_or_blank(line)) continue;
        auto f = csv::split(line);
        if (f.size() != kColumns.size())
            throw ValidationError("line " + std::to_string(line_no) + ": expected 8 fields, got " +
                                  std::to_string(f.size()));
        AircraftModel m;
        m.code = std::string(f[0]);
        m.category = category_from_string(f[1]);
        m.seats = static_cast<int>(csv::parse_int(f[2], "seats", line_no));
        m.empty_weight_kg = csv::parse_double(f[3], "empty_kg", line_no);
        m.pax_weight_kg = csv::parse_double(f[4], "pax_kg", line_no);
        m.fuel_200nm_kg = csv::parse_double(f[5], "fuel_200nm_kg", line_no);
        m.mtow_kg = csv::parse_double(f[6], "mtow_kg", line_no);
        m.mlw_kg = csv::parse_double(f[7], "mlw_kg", line_no);
        validate_model(m, "line " + std::to_string(line_no));
        models.push_back(std::move(m));
    }
    if (models.empty()) throw ValidationError("aircraft file: no aircraft rows");
    return from_models(std::move(models));
}

AircraftRegistry AircraftRegistry::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open aircraft file: " + path);
    return load(in);
}

AircraftRegistry AircraftRegistry::from_models(std::vector<AircraftModel> models) {
    AircraftRegistry r;
    r.models_ = std::move(models);
    r.index_and_validate();
    return r;
}

void AircraftRegistry::index_and_validate() {
    by_code_.clear();
    by_code_.reserve(models_.size());
    for (size_t i = 0; i < models_.size(); ++i) {
        validate_model(models_[i], "aircraft registry");
        auto [it, inserted] = by_code_.emplace(models_[i].code, i);
        if (!inserted)
            throw ValidationError("duplicate aircraft code '" + models_[i].code + "' (rows " +
                                  std::to_string(it->second + 1) + " and " + std::to_string(i + 1) +
                                  ")");
    }
}

bool AircraftRegistry::contains(std::string_view code) const {
    return by_code_.find(std::string(code)) != by_code_.end();
}

const AircraftModel* AircraftRegistry::find(std::string_view code) const {
    auto it = by_code_.find(std::string(code));
    return it == by_code_.end() ? nullptr : &models_[it->second];
}

const AircraftModel& AircraftRegistry::at(std::string_view code) const {
    const AircraftModel* m = find(code);
    if (!m) throw ValidationError("unknown aircraft code: '" + std::string(code) + "'");
    return *m;
}

AircraftCategory AircraftRegistry::category_of(std::string_view code) const {
    return at(code).category;
}

std::array<int, 4> AircraftRegistry::category_counts() const {
    std::array<int, 4> counts{};
    for (const auto& m : models_) counts[static_cast<size_t>(m.category)]++;
    return counts;
}

void AircraftRegistry::write_csv(std::ostream& out) const {
    out << "code,category,seats,empty_kg,pax_kg,fuel_200nm_kg,mtow_kg,mlw_kg\n";
    for (const auto& m : models_) {
        out << m.code << ',' << to_string(m.category) << ',' << m.seats << ','
            << csv::format_number(m.empty_weight_kg) << ',' << csv::format_number(m.pax_weight_kg)
            << ',' << csv::format_number(m.fuel_200nm_kg) << ',' << csv::format_number(m.mtow_kg)
            << ',' << csv::format_number(m.mlw_kg) << '\n';
    }
}

nlohmann::json AircraftRegistry::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : models_) {
        arr.push_back({{"code", m.code},
                       {"category", to_string(m.category)},
                       {"seats", m.seats},
                       {"empty_kg", m.empty_weight_kg},
                       {"pax_kg", m.pax_weight_kg},
                       {"fuel_200nm_kg", m.fuel_200nm_kg},
                       {"mtow_kg", m.mtow_kg},
                       {"mlw_kg", m.mlw_kg}});
    }
    return arr;
}

AircraftRegistry AircraftRegistry::from_json(const nlohmann::json& j) {
    std::vector<AircraftModel> models;
    for (const auto& e : j) {
        AircraftModel m;
        m.code = e.at("code").get<std::string>();
        m.category = category_from_string(e.at("category").get<std::string>());
        m.seats = e.at("seats").get<int>();
        m.empty_weight_kg = e.at("empty_kg").get<double>();
        m.pax_weight_kg = e.at("pax_kg").get<double>();
        m.fuel_200nm_kg = e.at("fuel_200nm_kg").get<double>();
        m.mtow_kg = e.at("mtow_kg").get<double>();
        m.mlw_kg = e.at("mlw_kg").get<double>();
        models.push_back(std::move(m));
    }
    return from_models(std::move(models));
}

CategorySummary category_summary(const AircraftRegistry& registry,
                                 const std::function<double(const AircraftModel&)>& metric) {
    CategorySummary s;
    std::array<double, 4> sums{};
    std::array<int, 4> counts{};
    double total = 0;
    for (const auto& m : registry.models()) {
        double v = metric(m);
        sums[static_cast<size_t>(m.category)] += v;
        counts[static_cast<size_t>(m.category)]++;
        total += v;
    }
    for (size_t i = 0; i < 4; ++i)
        s.category_mean[i] = counts[i] ? sums[i] / counts[i] : 0.0;
    s.overall_mean = registry.size() ? total / static_cast<double>(registry.size()) : 0.0;
    return s;
}

}  // namespace eflight
