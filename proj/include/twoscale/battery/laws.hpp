#pragma once

#include <vector>

#include <json.hpp>

#include "twoscale/core/discrete_dist.hpp"

namespace twoscale::battery {

/// Fitted netload laws, one per (periodicity class, half-hour slot).
struct NetloadLaws {
    std::vector<std::vector<DiscreteDist>> by_class;  // [class - 1][slot]

    int n_classes() const { return static_cast<int>(by_class.size()); }
    const std::vector<DiscreteDist>& for_class(int cls) const { return by_class.at(cls - 1); }
};

/// Battery price law per day.
struct PriceLaws {
    std::vector<DiscreteDist> by_day;
    const DiscreteDist& at(int day) const { return by_day.at(day); }
};

nlohmann::json to_json(const NetloadLaws& laws);
NetloadLaws netload_laws_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PriceLaws& laws);
PriceLaws price_laws_from_json(const nlohmann::json& j);

}  // namespace twoscale::battery
