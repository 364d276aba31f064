#pragma once

#include "eflight/error.hpp"

namespace eflight {

// Global physics and policy constants. Defaults reproduce the published model;
// every field can be overridden from the CLI.
struct ModelParameters {
    double lhv_mj_per_kg = 43.1;             // kerosene lower heating value
    double eta_fossil = 0.40;                // combustion powertrain efficiency
    double eta_electric = 0.80;              // electric powertrain efficiency
    double wh_per_mj = 1000.0 / 3.6;         // exact, not the rounded 277
    double battery_density_wh_per_kg = 300.0;
    double pax_mass_kg = 95.0;               // passenger plus cargo allowance
    double ci_fuel_kg_per_kg = 3.16;         // kg CO2e per kg kerosene burned
    double short_haul_nm = 200.0;            // strict upper bound for short haul
    double dirty_grid_g_per_kwh = 530.0;     // clean/dirty comparator

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0))
                throw ValidationError(std::string("parameter must be positive: ") + name);
        };
        positive(lhv_mj_per_kg, "lhv_mj_per_kg");
        positive(wh_per_mj, "wh_per_mj");
        positive(battery_density_wh_per_kg, "battery_density_wh_per_kg");
        positive(pax_mass_kg, "pax_mass_kg");
        positive(ci_fuel_kg_per_kg, "ci_fuel_kg_per_kg");
        positive(short_haul_nm, "short_haul_nm");
        positive(dirty_grid_g_per_kwh, "dirty_grid_g_per_kwh");
        if (!(eta_fossil > 0.0 && eta_fossil < 1.0))
            throw ValidationError("eta_fossil must lie in (0, 1)");
        if (!(eta_electric > 0.0 && eta_electric <= 1.0))
            throw ValidationError("eta_electric must lie in (0, 1]");
    }

    // Wh of battery energy per kg of kerosene displaced (~5986.11 at defaults).
    double fuel_to_battery_wh_per_kg() const {
        return lhv_mj_per_kg * (eta_fossil / eta_electric) * wh_per_mj;
    }

    // Grid intensity at which electric and kerosene emissions equalize, g/kWh.
    // Independent of the flight mix as long as electric curves are exact-scaled.
    double constant_tipping_g_per_kwh() const {
        return ci_fuel_kg_per_kg * 1e6 / fuel_to_battery_wh_per_kg();
    }
};

}  // namespace eflight
