#pragma once

#include <filesystem>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "twoscale/battery/data.hpp"
#include "twoscale/battery/laws.hpp"
#include "twoscale/battery/model.hpp"
#include "twoscale/intraday/battery_intraday.hpp"
#include "twoscale/intraday/periodicity.hpp"
#include "twoscale/slowscale/battery_bellman.hpp"
#include "twoscale/slowscale/value_seq.hpp"

namespace twoscale::policy {

enum class Mode { price, resource };
std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);

/// Everything the online policies read. Pointers for the mode not in use may be null.
struct PolicyData {
    const battery::BatteryConfig* cfg = nullptr;
    const IntradayGrids* grids = nullptr;
    const PeriodicityClassMap* classes = nullptr;
    const battery::PriceLaws* prices = nullptr;
    const std::vector<IntradayPriceTable>* price_tables = nullptr;
    const SlowValueSeq* price_values = nullptr;
    const std::vector<IntradayResourceTable>* resource_tables = nullptr;
    const SlowValueSeq* resource_values = nullptr;
};

/// Aging price for day d at slow state x (s is ignored). Ties -> smallest pi.
PriceChoice select_price(const battery::BatteryState& x, int d, const PolicyData& data);

/// Health target for day d. Ties -> largest target. The renewal part of the
/// rule is applied at the end of the day by decide_renewal once the battery
/// price is known.
ResourceChoice select_resource(const battery::BatteryState& x, int d, const PolicyData& data);

struct SimulationRecord {
    std::vector<battery::BatteryState> trajectory;  // at (d, 0) for d = 0..D+1
    std::vector<std::pair<int, double>> renewals;   // (day, kWh)
    std::vector<double> daily_bills;                // undiscounted electricity bills
    std::vector<double> decisions;                  // pi (price mode) or health target (resource mode)
    double total_cost = 0.0;                        // discounted bills + renewals + final cost
    std::size_t admissibility_violations = 0;
    std::size_t clamped = 0;                        // states pulled back onto a table box
};

struct SimulationSummary {
    Mode mode = Mode::price;
    std::size_t n = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t violations = 0;
    std::size_t clamped = 0;
    double decision_us = 0.0;  // average time per fast decision; not reproducible
};

struct SimulationResult {
    std::vector<SimulationRecord> records;
    SimulationSummary summary;
};

/// Replays both time scales on every scenario from x0. Scenarios run in
/// parallel; each one is sequential and deterministic.
SimulationResult simulate_policy(const battery::ScenarioSet& scenarios, Mode mode, const PolicyData& data,
                                 const battery::BatteryState& x0 = {});

/// scenario_id,total_cost,renewal_days,renewal_sizes (lists joined by ';').
void write_summary_csv(const std::filesystem::path& path, const SimulationResult& r);
/// Stats without the timing, which goes under "metadata".
nlohmann::json summary_json(const SimulationResult& r);
void write_trajectories_csv(const std::filesystem::path& path, const SimulationResult& r);

}  // namespace twoscale::policy
