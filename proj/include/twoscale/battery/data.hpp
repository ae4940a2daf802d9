#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <vector>

#include "twoscale/battery/laws.hpp"
#include "twoscale/battery/model.hpp"
#include "twoscale/intraday/periodicity.hpp"

namespace twoscale::battery {

/// Netloads per (scenario, day, slot) in kWh and a battery price per
/// (scenario, day) in $/kWh. Either part may be empty.
struct ScenarioSet {
    int n_days = 0;
    int n_slots = kSlotsPerDay;
    std::vector<std::vector<double>> netload;  // [scenario][day * n_slots + slot]
    std::vector<std::vector<double>> price;    // [scenario][day]

    std::size_t size() const { return netload.empty() ? price.size() : netload.size(); }
    double load(std::size_t s, int day, int slot) const { return netload[s][static_cast<std::size_t>(day * n_slots + slot)]; }
    void validate() const;
};

/// RNG of scenario `index` under a master seed.
std::mt19937_64 scenario_rng(std::uint64_t seed, std::uint64_t index);

struct KMeansResult {
    std::vector<double> centers;  // ascending
    std::vector<double> shares;
};

/// 1-D k-means: k-means++ seeding then Lloyd iterations. Empty clusters are
/// re-seeded from the point farthest from its center. Centers that coincide
/// are merged, so fewer than k atoms come back when the data has fewer
/// distinct values.
KMeansResult kmeans_1d(const std::vector<double>& data, int k, std::uint64_t seed, int max_iter = 300);
DiscreteDist kmeans_law(const std::vector<double>& data, int k, std::uint64_t seed);

/// Per (class, slot) law from pooled observations of the days of that class.
NetloadLaws fit_netload_distributions(const ScenarioSet& raw, const PeriodicityClassMap& classes, int k,
                                      std::uint64_t seed);

struct PriceForecast {
    std::vector<double> yearly = {0.32, 0.26, 0.22, 0.19, 0.17};  // $/kWh at the start of each year
    double sigma = 0.03;
    double floor = 0.02;

    double at_day(int day) const;  // linear in time between yearly points, constant after the last
};

/// Daily battery price paths: forecast + N(0, sigma), truncated below at the floor.
std::vector<std::vector<double>> gen_battery_price_scenarios(const PriceForecast& f, int n_days, int n,
                                                             std::uint64_t seed);

/// Per-day law of the price by k-means over the generated paths.
PriceLaws fit_price_laws(const std::vector<std::vector<double>>& paths, int k, std::uint64_t seed);

/// Independent draws per (day, slot) from the class law, and per day from the price law.
ScenarioSet white_noise_resample(const NetloadLaws& laws, const PeriodicityClassMap& classes,
                                 const PriceLaws& prices, int n, std::uint64_t seed);

struct SyntheticNetload {
    double base_load = 140.0;     // kWh per half hour
    double evening_bump = 70.0;
    double solar_peak = 260.0;    // midsummer clear-sky production per half hour
    double noise_sd = 25.0;
};

/// Synthetic history: daily load shape minus seasonal solar plus noise.
ScenarioSet synthetic_netload(const SyntheticNetload& cfg, int n_days, int n_scenarios, std::uint64_t seed);

void write_netload_csv(const std::filesystem::path& path, const ScenarioSet& s);
void write_price_csv(const std::filesystem::path& path, const ScenarioSet& s);
/// Reads `scenario,day,slot,netload_kwh` and optionally `scenario,day,price_usd_per_kwh`.
ScenarioSet read_scenarios_csv(const std::filesystem::path& netload, const std::filesystem::path& price = {});

}  // namespace twoscale::battery
