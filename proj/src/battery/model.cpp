#include "twoscale/battery/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace twoscale::battery {

Tariff Tariff::time_of_use() {
    std::array<double, kSlotsPerDay> r{};
    for (int m = 0; m < kSlotsPerDay; ++m) {
        if (m < 14 || m >= 44) r[m] = 0.0255;       // 22:00-7:00
        else if (m < 34) r[m] = 0.0644;             // 7:00-17:00
        else r[m] = 0.2485;                         // 17:00-22:00
    }
    return Tariff(r);
}

Tariff::Tariff(std::array<double, kSlotsPerDay> rates) : rates_(rates) {
    for (double v : rates_)
        if (!(v >= 0.0)) throw std::invalid_argument("Tariff: negative rate");
}

double Tariff::rate(int slot) const {
    if (slot < 0 || slot >= kSlotsPerDay) throw std::out_of_range("tariff slot out of range: " + std::to_string(slot));
    return rates_[slot];
}

double tariff_rate(int slot) {
    static const Tariff tou = Tariff::time_of_use();
    return tou.rate(slot);
}

std::vector<double> BatteryConfig::default_renewal_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 15; ++k) g.push_back(100.0 * k);
    return g;
}

int BatteryConfig::n_cycles(double capacity) const {
    const auto it = cycles_by_capacity.find(capacity);
    return it == cycles_by_capacity.end() ? cycles : it->second;
}

double BatteryConfig::final_cost_at(double h, double /*c*/) const {
    if (final_cost == FinalCost::zero) return 0.0;
    return final_cost_weight * std::max(0.0, health_cap(r_max) - h);
}

void BatteryConfig::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument("BatteryConfig: " + m); };
    if (!(rho_c > 0.0 && rho_c <= 1.0)) fail("rho_c must lie in (0, 1]");
    if (!(rho_d > 0.0 && rho_d <= 1.0)) fail("rho_d must lie in (0, 1]");
    if (!(u_min < 0.0 && u_max > 0.0)) fail("need u_min < 0 < u_max");
    if (!(alpha > 0.0 && alpha <= 1.0)) fail("alpha must lie in (0, 1]");
    if (cycles < 0) fail("negative cycle count");
    if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must lie in (0, 1]");
    if (renewal_grid.empty() || renewal_grid.front() != 0.0) fail("renewal grid must start at 0");
    for (std::size_t i = 0; i < renewal_grid.size(); ++i) {
        if (renewal_grid[i] < 0.0 || renewal_grid[i] > r_max) fail("renewal grid outside [0, r_max]");
        if (i > 0 && renewal_grid[i] <= renewal_grid[i - 1]) fail("renewal grid not increasing");
    }
}

BatteryState fast_dynamics(const BatteryConfig& cfg, const BatteryState& x, double u) {
    const double up = std::max(0.0, u);
    const double um = std::max(0.0, -u);
    return {x.s + cfg.rho_c * up - cfg.rho_d * um, x.h - up - um, x.c};
}

BatteryState renewal_dynamics(const BatteryConfig& cfg, const BatteryState& x, double r) {
    if (r > 0.0) return {0.0, cfg.health_cap(r), r};
    return x;
}

double stage_cost(const Tariff& tariff, double u, double w, int slot) {
    const double up = std::max(0.0, u);
    const double um = std::max(0.0, -u);
    return tariff.rate(slot) * std::max(0.0, w + up - um);
}

bool admissible(const BatteryConfig& cfg, const BatteryState& x, double tol) {
    return x.s >= -tol && x.s <= cfg.soc_cap(x.c) + tol && x.h >= -tol && x.h <= cfg.health_cap(x.c) + tol &&
           x.c >= 0.0 && x.c <= cfg.r_max;
}

nlohmann::json to_json(const BatteryConfig& cfg) {
    nlohmann::json over = nlohmann::json::object();
    for (const auto& [c, n] : cfg.cycles_by_capacity) over[std::to_string(static_cast<long long>(c))] = n;
    return {{"rho_c", cfg.rho_c},
            {"rho_d", cfg.rho_d},
            {"u_min", cfg.u_min},
            {"u_max", cfg.u_max},
            {"r_max", cfg.r_max},
            {"alpha", cfg.alpha},
            {"cycles", cfg.cycles},
            {"cycles_by_capacity", over},
            {"gamma", cfg.gamma},
            {"final_cost", cfg.final_cost == FinalCost::zero ? "zero" : "health_deficit"},
            {"final_cost_weight", cfg.final_cost_weight},
            {"renewal_grid", cfg.renewal_grid},
            {"tariff", cfg.tariff.rates()}};
}

BatteryConfig battery_config_from_json(const nlohmann::json& j) {
    BatteryConfig c;
    c.rho_c = j.value("rho_c", c.rho_c);
    c.rho_d = j.value("rho_d", c.rho_d);
    c.u_max = j.value("u_max", c.u_max);
    c.u_min = j.value("u_min", -c.u_max);
    c.r_max = j.value("r_max", c.r_max);
    c.alpha = j.value("alpha", c.alpha);
    c.cycles = j.value("cycles", c.cycles);
    if (j.contains("cycles_by_capacity"))
        for (const auto& [k, v] : j.at("cycles_by_capacity").items()) c.cycles_by_capacity[std::stod(k)] = v.get<int>();
    c.gamma = j.value("gamma", c.gamma);
    const std::string fc = j.value("final_cost", std::string("zero"));
    if (fc == "zero") c.final_cost = FinalCost::zero;
    else if (fc == "health_deficit") c.final_cost = FinalCost::health_deficit;
    else throw std::invalid_argument("unknown final_cost: " + fc);
    c.final_cost_weight = j.value("final_cost_weight", c.final_cost_weight);
    if (j.contains("renewal_grid")) c.renewal_grid = j.at("renewal_grid").get<std::vector<double>>();
    if (j.contains("tariff")) {
        const auto v = j.at("tariff").get<std::vector<double>>();
        if (v.size() != kSlotsPerDay) throw std::invalid_argument("tariff needs 48 rates");
        std::array<double, kSlotsPerDay> r{};
        std::copy(v.begin(), v.end(), r.begin());
        c.tariff = Tariff(r);
    }
    c.validate();
    return c;
}

}  // namespace twoscale::battery
