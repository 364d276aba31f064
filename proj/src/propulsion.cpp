#include "eflight/propulsion.hpp"

namespace eflight {

std::string_view to_string(LimitKind k) {
    return k == LimitKind::Mlw ? "mlw" : "mtow";
}

std::string_view to_string(SensitivityParameter p) {
    switch (p) {
        case SensitivityParameter::PaxMassDown5: return "pax_mass_-5pct";
        case SensitivityParameter::EtaFossilDown5: return "eta_fossil_-5pct";
        case SensitivityParameter::EtaElectricUp5: return "eta_electric_+5pct";
        case SensitivityParameter::DensityUp5: return "density_+5pct";
        case SensitivityParameter::MlwUp5: return "mlw_+5pct";
    }
    throw InvariantError("unhandled sensitivity parameter");
}

BatteryRequirement battery_requirement(double fuel_kg, const ModelParameters& params) {
    if (fuel_kg < 0) throw ValidationError("fuel mass must be non-negative");
    BatteryRequirement r;
    r.fuel_energy_mj = fuel_kg * params.lhv_mj_per_kg;
    r.propulsive_energy_mj = r.fuel_energy_mj * params.eta_fossil;
    r.battery_energy_wh = r.propulsive_energy_mj / params.eta_electric * params.wh_per_mj;
    r.battery_mass_kg = r.battery_energy_wh / params.battery_density_wh_per_kg;
    return r;
}

namespace {

double limit_of(const AircraftModel& m, LimitKind k) {
    return k == LimitKind::Mlw ? m.mlw_kg : m.mtow_kg;
}

ExceedanceResult exceedance_scaled(const AircraftModel& model, const ModelParameters& params,
                                   LimitKind limit_kind, double energy_scale) {
    double limit = limit_of(model, limit_kind);
    if (!(limit > 0)) throw ValidationError("non-positive weight limit for '" + model.code + "'");
    ExceedanceResult r;
    r.limit_kind = limit_kind;
    r.battery_mass_kg =
        battery_requirement(model.fuel_200nm_kg, params).battery_mass_kg * energy_scale;
    r.landing_mass_kg =
        model.empty_weight_kg + model.seats * params.pax_mass_kg + r.battery_mass_kg;
    r.ratio = r.landing_mass_kg / limit;
    r.battery_share = r.battery_mass_kg / limit;
    return r;
}

}  // namespace

ExceedanceResult exceedance(const AircraftModel& model, const ModelParameters& params,
                            LimitKind limit) {
    return exceedance_scaled(model, params, limit, 1.0);
}

double requisite_density(const AircraftModel& model, const ModelParameters& params,
                         LimitKind limit) {
    double allowance =
        limit_of(model, limit) - model.empty_weight_kg - model.seats * params.pax_mass_kg;
    if (!(allowance > 0))
        throw ValidationError("battery allowance non-positive for '" + model.code +
                              "': structurally impossible at this limit");
    return battery_requirement(model.fuel_200nm_kg, params).battery_energy_wh / allowance;
}

ExceedanceResult reserve_stress(const AircraftModel& model, const ModelParameters& params,
                                double reserve_factor, LimitKind limit) {
    if (reserve_factor < 0) throw ValidationError("reserve factor must be non-negative");
    return exceedance_scaled(model, params, limit, 1.0 + reserve_factor);
}

std::array<SensitivityRow, 5> sensitivity_table(const AircraftModel& model,
                                                const ModelParameters& params) {
    const double base = exceedance(model, params, LimitKind::Mlw).ratio;

    auto row = [&](SensitivityParameter p, double ratio) {
        return SensitivityRow{p, ratio, 100.0 * (ratio / base - 1.0)};
    };

    ModelParameters pax = params;
    pax.pax_mass_kg *= 0.95;
    ModelParameters etaf = params;
    etaf.eta_fossil *= 0.95;
    ModelParameters etae = params;
    etae.eta_electric *= 1.05;
    ModelParameters dens = params;
    dens.battery_density_wh_per_kg *= 1.05;
    AircraftModel mlw_up = model;
    mlw_up.mlw_kg *= 1.05;
    mlw_up.mtow_kg = std::max(mlw_up.mtow_kg, mlw_up.mlw_kg);  // keep model valid

    return {row(SensitivityParameter::PaxMassDown5, exceedance(model, pax).ratio),
            row(SensitivityParameter::EtaFossilDown5, exceedance(model, etaf).ratio),
            row(SensitivityParameter::EtaElectricUp5, exceedance(model, etae).ratio),
            row(SensitivityParameter::DensityUp5, exceedance(model, dens).ratio),
            row(SensitivityParameter::MlwUp5, exceedance(mlw_up, params).ratio)};
}

}  // namespace eflight
