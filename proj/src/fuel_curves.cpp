#include "eflight/fuel_curves.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "eflight/csv.hpp"

namespace eflight {

double FuelBurnCurve::predict(double distance_nm) const {
    if (distance_nm < 0) throw ValidationError("distance must be non-negative");
    return slope_kg_per_nm * distance_nm + intercept_kg;
}

double ElectricEnergyCurve::predict(double distance_nm) const {
    if (distance_nm < 0) throw ValidationError("distance must be non-negative");
    return slope_wh_per_nm * distance_nm + intercept_wh;
}

FuelBurnCurve fit_fuel_curve(std::string code,
                             std::span<const std::pair<double, double>> points) {
    const size_t n = points.size();
    if (n < 2)
        throw ValidationError("curve fit for '" + code + "': need at least 2 points, got " +
                              std::to_string(n));
    for (const auto& [d, f] : points)
        if (!(d > 0) || !(f > 0))
            throw ValidationError("curve fit for '" + code + "': distances and fuel masses must be positive");

    // centered normal equations
    double mean_d = 0, mean_f = 0;
    for (const auto& [d, f] : points) {
        mean_d += d;
        mean_f += f;
    }
    mean_d /= static_cast<double>(n);
    mean_f /= static_cast<double>(n);

    double sxx = 0, sxy = 0;
    for (const auto& [d, f] : points) {
        sxx += (d - mean_d) * (d - mean_d);
        sxy += (d - mean_d) * (f - mean_f);
    }
    if (!(sxx > 0))
        throw ValidationError("curve fit for '" + code + "': need at least 2 distinct distances");

    FuelBurnCurve c;
    c.code = std::move(code);
    c.slope_kg_per_nm = sxy / sxx;
    c.intercept_kg = mean_f - c.slope_kg_per_nm * mean_d;
    c.fit_points = static_cast<int>(n);

    double ss = 0;
    for (const auto& [d, f] : points) {
        double r = f - (c.slope_kg_per_nm * d + c.intercept_kg);
        ss += r * r;
    }
    c.rmse_kg = std::sqrt(ss / static_cast<double>(n));

    if (!(c.slope_kg_per_nm > 0))
        throw ValidationError("curve fit for '" + c.code + "': non-positive slope " +
                              std::to_string(c.slope_kg_per_nm));
    if (c.intercept_kg < 0)
        throw ValidationError("curve fit for '" + c.code + "': negative intercept " +
                              std::to_string(c.intercept_kg));
    return c;
}

ElectricEnergyCurve electric_curve(const FuelBurnCurve& curve, const ModelParameters& params) {
    const double k = params.fuel_to_battery_wh_per_kg();
    return {curve.code, curve.slope_kg_per_nm * k, curve.intercept_kg * k};
}

void CurveSet::add(FuelBurnCurve fuel, const ModelParameters& params) {
    auto [it, inserted] = by_code_.emplace(fuel.code, fuel_.size());
    if (!inserted) throw ValidationError("duplicate curve for aircraft '" + fuel.code + "'");
    electric_.push_back(electric_curve(fuel, params));
    fuel_.push_back(std::move(fuel));
}

CurveSet CurveSet::fit_from_points_csv(std::istream& in, const ModelParameters& params) {
    std::string line;
    size_t line_no = 0;
    if (!std::getline(in, line) || csv::split(line) != std::vector<std::string_view>{
                                       "code", "distance_nm", "fuel_kg"})
        throw ValidationError("fuel points file: expected header 'code,distance_nm,fuel_kg'");
    ++line_no;

    // keyed by first-seen order
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<double, double>>> pts;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::is_comment_or_blank(line)) continue;
        auto f = csv::split(line);
        if (f.size() != 3)
            throw ValidationError("line " + std::to_string(line_no) + ": expected 3 fields");
        std::string code(f[0]);
        if (pts.find(code) == pts.end()) order.push_back(code);
        pts[code].emplace_back(csv::parse_double(f[1], "distance_nm", line_no),
                               csv::parse_double(f[2], "fuel_kg", line_no));
    }
    if (order.empty()) throw ValidationError("fuel points file: no observations");

    CurveSet set;
    for (const auto& code : order) set.add(fit_fuel_curve(code, pts[code]), params);
    return set;
}

CurveSet CurveSet::fit_from_points_file(const std::string& path, const ModelParameters& params) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open fuel points file: " + path);
    return fit_from_points_csv(in, params);
}

const FuelBurnCurve* CurveSet::find_fuel(std::string_view code) const {
    auto it = by_code_.find(std::string(code));
    return it == by_code_.end() ? nullptr : &fuel_[it->second];
}

const ElectricEnergyCurve* CurveSet::find_electric(std::string_view code) const {
    auto it = by_code_.find(std::string(code));
    return it == by_code_.end() ? nullptr : &electric_[it->second];
}

const FuelBurnCurve& CurveSet::fuel_at(std::string_view code) const {
    const auto* c = find_fuel(code);
    if (!c) throw ValidationError("no fuel curve for aircraft '" + std::string(code) + "'");
    return *c;
}

const ElectricEnergyCurve& CurveSet::electric_at(std::string_view code) const {
    const auto* c = find_electric(code);
    if (!c) throw ValidationError("no electric curve for aircraft '" + std::string(code) + "'");
    return *c;
}

void CurveSet::write_csv(std::ostream& out) const {
    out << "code,slope_kg_per_nm,intercept_kg,slope_wh_per_nm,intercept_wh,fit_points,rmse_kg\n";
    for (size_t i = 0; i < fuel_.size(); ++i) {
        const auto& f = fuel_[i];
        const auto& e = electric_[i];
        out << f.code << ',' << csv::format_number(f.slope_kg_per_nm) << ','
            << csv::format_number(f.intercept_kg) << ',' << csv::format_number(e.slope_wh_per_nm)
            << ',' << csv::format_number(e.intercept_wh) << ',' << f.fit_points << ','
            << csv::format_number(f.rmse_kg) << '\n';
    }
}

}  // namespace eflight
