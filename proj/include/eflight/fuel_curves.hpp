#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eflight/params.hpp"

namespace eflight {

// Affine kerosene burn model: fuel(D) = slope * D + intercept.
struct FuelBurnCurve {
    std::string code;
    double slope_kg_per_nm = 0;   // fuel per nautical mile
    double intercept_kg = 0;      // takeoff allocation
    int fit_points = 0;
    double rmse_kg = 0;

    double predict(double distance_nm) const;
};

// Battery-side counterpart, derived by exact scaling (never refit).
struct ElectricEnergyCurve {
    std::string code;
    double slope_wh_per_nm = 0;
    double intercept_wh = 0;

    double predict(double distance_nm) const;
};

// Ordinary least squares over (distance, fuel) observations. Requires at
// least two distinct distances; rejects non-positive slope or negative
// intercept since predicted fuel must stay positive on [0, short_haul].
FuelBurnCurve fit_fuel_curve(std::string code,
                             std::span<const std::pair<double, double>> points);

ElectricEnergyCurve electric_curve(const FuelBurnCurve& curve, const ModelParameters& params);

// Per-aircraft curve collection keyed by code; iteration order = fit order.
class CurveSet {
public:
    static CurveSet fit_from_points_csv(std::istream& in, const ModelParameters& params);
    static CurveSet fit_from_points_file(const std::string& path, const ModelParameters& params);

    void add(FuelBurnCurve fuel, const ModelParameters& params);

    const FuelBurnCurve* find_fuel(std::string_view code) const;
    const ElectricEnergyCurve* find_electric(std::string_view code) const;
    const FuelBurnCurve& fuel_at(std::string_view code) const;
    const ElectricEnergyCurve& electric_at(std::string_view code) const;

    const std::vector<FuelBurnCurve>& fuel_curves() const { return fuel_; }
    const std::vector<ElectricEnergyCurve>& electric_curves() const { return electric_; }
    std::size_t size() const { return fuel_.size(); }

    void write_csv(std::ostream& out) const;

private:
    std::vector<FuelBurnCurve> fuel_;
    std::vector<ElectricEnergyCurve> electric_;
    std::unordered_map<std::string, std::size_t> by_code_;
};

}  // namespace eflight
