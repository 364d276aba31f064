#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eflight/error.hpp"

#include <json.hpp>

namespace eflight {

enum class AircraftCategory { Turboprop, RegionalJet, Narrowbody, Widebody };

inline constexpr std::array<AircraftCategory, 4> kAllCategories = {
    AircraftCategory::Turboprop, AircraftCategory::RegionalJet,
    AircraftCategory::Narrowbody, AircraftCategory::Widebody};

std::string_view to_string(AircraftCategory c);
AircraftCategory category_from_string(std::string_view s);

// One row of the bundled 47-aircraft performance dataset.
struct AircraftModel {
    std::string code;
    AircraftCategory category = AircraftCategory::Turboprop;
    int seats = 0;
    double empty_weight_kg = 0;
    double pax_weight_kg = 0;     // seats x per-pax mass, stored for cross-check
    double fuel_200nm_kg = 0;     // kerosene for the 200 nm reference mission
    double mtow_kg = 0;
    double mlw_kg = 0;

    bool operator==(const AircraftModel&) const = default;
};

// Immutable after load; safe to share across threads.
class AircraftRegistry {
public:
    static AircraftRegistry load(std::istream& in);
    static AircraftRegistry load_file(const std::string& path);
    static AircraftRegistry from_models(std::vector<AircraftModel> models);

    const std::vector<AircraftModel>& models() const { return models_; }
    std::size_t size() const { return models_.size(); }

    bool contains(std::string_view code) const;
    const AircraftModel* find(std::string_view code) const;
    const AircraftModel& at(std::string_view code) const;
    AircraftCategory category_of(std::string_view code) const;

    std::array<int, 4> category_counts() const;

    void write_csv(std::ostream& out) const;
    nlohmann::json to_json() const;
    static AircraftRegistry from_json(const nlohmann::json& j);

    bool operator==(const AircraftRegistry& other) const { return models_ == other.models_; }

private:
    void index_and_validate();

    std::vector<AircraftModel> models_;  // file order preserved
    std::unordered_map<std::string, std::size_t> by_code_;
};

struct CategorySummary {
    std::array<double, 4> category_mean{};  // indexed by AircraftCategory
    double overall_mean = 0;
};

// Arithmetic mean of `metric` per category plus the fleet-wide mean.
CategorySummary category_summary(const AircraftRegistry& registry,
                                 const std::function<double(const AircraftModel&)>& metric);

}  // namespace eflight
