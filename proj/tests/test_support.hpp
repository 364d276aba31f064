#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "eflight/aircraft.hpp"
#include "eflight/emissions.hpp"
#include "eflight/fuel_curves.hpp"
#include "eflight/params.hpp"

namespace testing {

inline std::string data_path(const std::string& name) {
    return std::string(EFLIGHT_DATA_DIR) + "/" + name;
}

inline const eflight::ModelParameters& defaults() {
    static eflight::ModelParameters p;
    return p;
}

inline const eflight::AircraftRegistry& fixture_registry() {
    static auto r = eflight::AircraftRegistry::load_file(data_path("aircraft.csv"));
    return r;
}

inline const eflight::CurveSet& fixture_curves() {
    static auto c = eflight::CurveSet::fit_from_points_file(data_path("fuel_points.csv"), defaults());
    return c;
}

inline const eflight::GridTable& fixture_grid() {
    static auto g = eflight::GridTable::load_file(data_path("grid.csv"));
    return g;
}

inline const eflight::EmissionsLedger& fixture_country_ledger() {
    static auto l = eflight::load_country_table_file(data_path("country_ledger.csv"));
    return l;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace testing
