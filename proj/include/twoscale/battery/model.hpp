#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace twoscale::battery {

constexpr int kSlotsPerDay = 48;

/// Time-of-use tariff, one rate per half-hour slot ($/kWh).
class Tariff {
public:
    /// 0.0255 for 22:00-7:00, 0.0644 for 7:00-17:00, 0.2485 for 17:00-22:00.
    static Tariff time_of_use();
    explicit Tariff(std::array<double, kSlotsPerDay> rates);
    Tariff() : Tariff(time_of_use()) {}

    double rate(int slot) const;  // throws std::out_of_range
    const std::array<double, kSlotsPerDay>& rates() const { return rates_; }

private:
    std::array<double, kSlotsPerDay> rates_{};
};

struct BatteryState {
    double s = 0.0;  // state of charge, kWh
    double h = 0.0;  // remaining exchangeable energy, kWh
    double c = 0.0;  // capacity, kWh
    friend bool operator==(const BatteryState&, const BatteryState&) = default;
};

enum class FinalCost { zero, health_deficit };

struct BatteryConfig {
    double rho_c = 0.95;
    double rho_d = 0.95;
    double u_min = -150.0;  // kWh per half hour
    double u_max = 150.0;
    double r_max = 1500.0;
    double alpha = 0.8;     // usable fraction of the capacity
    int cycles = 4;         // default value of N(c)
    std::map<double, int> cycles_by_capacity;  // overrides of N at given capacities
    double gamma = 0.99986;
    FinalCost final_cost = FinalCost::zero;
    double final_cost_weight = 0.0;  // $/kWh for health_deficit
    std::vector<double> renewal_grid = default_renewal_grid();
    Tariff tariff;

    static std::vector<double> default_renewal_grid();

    int n_cycles(double capacity) const;
    double health_cap(double capacity) const { return n_cycles(capacity) * capacity; }
    double soc_cap(double capacity) const { return alpha * capacity; }
    double final_cost_at(double h, double c) const;

    /// Throws std::invalid_argument when the invariants do not hold.
    void validate() const;
};

BatteryState fast_dynamics(const BatteryConfig& cfg, const BatteryState& x, double u);
BatteryState renewal_dynamics(const BatteryConfig& cfg, const BatteryState& x, double r);
double stage_cost(const Tariff& tariff, double u, double w, int slot);
double tariff_rate(int slot);

/// Bound constraints on a state; tol absorbs rounding in the replay.
bool admissible(const BatteryConfig& cfg, const BatteryState& x, double tol = 1e-9);

nlohmann::json to_json(const BatteryConfig& cfg);
BatteryConfig battery_config_from_json(const nlohmann::json& j);

}  // namespace twoscale::battery
