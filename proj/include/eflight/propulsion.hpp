#pragma once

#include <array>
#include <string_view>

#include "eflight/aircraft.hpp"
#include "eflight/params.hpp"

namespace eflight {

enum class LimitKind { Mlw, Mtow };

std::string_view to_string(LimitKind k);

// Energy chain for one mission: kerosene mass -> fuel energy -> propulsive
// energy -> battery-side energy -> battery mass.
struct BatteryRequirement {
    double fuel_energy_mj = 0;
    double propulsive_energy_mj = 0;
    double battery_energy_wh = 0;
    double battery_mass_kg = 0;
};

BatteryRequirement battery_requirement(double fuel_kg, const ModelParameters& params);

struct ExceedanceResult {
    double battery_mass_kg = 0;
    double landing_mass_kg = 0;   // empty + passengers + battery
    double ratio = 0;             // landing mass / limit
    LimitKind limit_kind = LimitKind::Mlw;
    double battery_share = 0;     // battery mass / limit
};

// Ratio of the electrified landing mass to the MLW (or MTOW). Above 1.0 the
// electrified mission is infeasible at the given energy density.
ExceedanceResult exceedance(const AircraftModel& model, const ModelParameters& params,
                            LimitKind limit = LimitKind::Mlw);

// Battery energy density at which exceedance equals exactly 1.0 (closed form).
double requisite_density(const AircraftModel& model, const ModelParameters& params,
                         LimitKind limit = LimitKind::Mlw);

// Exceedance with mission energy scaled by (1 + reserve_factor).
ExceedanceResult reserve_stress(const AircraftModel& model, const ModelParameters& params,
                                double reserve_factor, LimitKind limit = LimitKind::Mlw);

enum class SensitivityParameter {
    PaxMassDown5,      // passenger mass -5%
    EtaFossilDown5,    // combustion efficiency -5%
    EtaElectricUp5,    // electric efficiency +5%
    DensityUp5,        // energy density +5%
    MlwUp5,            // landing-weight limit +5%
};

std::string_view to_string(SensitivityParameter p);

struct SensitivityRow {
    SensitivityParameter parameter;
    double new_ratio = 0;
    double relative_change_pct = 0;  // 100 * (new_ratio / base_ratio - 1)
};

// One-at-a-time 5% perturbations of the MLW exceedance, all else at `params`.
std::array<SensitivityRow, 5> sensitivity_table(const AircraftModel& model,
                                                const ModelParameters& params);

}  // namespace eflight
