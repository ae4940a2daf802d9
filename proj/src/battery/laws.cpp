#include "twoscale/battery/laws.hpp"

#include "twoscale/core/serialize.hpp"

namespace twoscale::battery {

nlohmann::json to_json(const NetloadLaws& laws) {
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& slots : laws.by_class) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& d : slots) row.push_back(twoscale::to_json(d));
        classes.push_back(std::move(row));
    }
    return {{"classes", std::move(classes)}};
}

NetloadLaws netload_laws_from_json(const nlohmann::json& j) {
    NetloadLaws out;
    for (const auto& row : j.at("classes")) {
        std::vector<DiscreteDist> slots;
        for (const auto& d : row) slots.push_back(dist_from_json(d));
        out.by_class.push_back(std::move(slots));
    }
    return out;
}

nlohmann::json to_json(const PriceLaws& laws) {
    nlohmann::json days = nlohmann::json::array();
    for (const auto& d : laws.by_day) days.push_back(twoscale::to_json(d));
    return {{"days", std::move(days)}};
}

PriceLaws price_laws_from_json(const nlohmann::json& j) {
    PriceLaws out;
    for (const auto& d : j.at("days")) out.by_day.push_back(dist_from_json(d));
    return out;
}

}  // namespace twoscale::battery
