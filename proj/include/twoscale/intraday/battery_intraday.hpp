#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "twoscale/battery/laws.hpp"
#include "twoscale/battery/model.hpp"
#include "twoscale/core/grid_value_fn.hpp"

namespace twoscale {

struct IntradayGrids {
    std::vector<double> capacity = battery::BatteryConfig::default_renewal_grid();  // kWh
    std::vector<double> dh = default_dh();                                          // kWh
    std::vector<double> price = {0.0, 0.05, 0.10, 0.15, 0.20};                      // $/kWh, pi = -p^h
    int soc_points = 51;
    int control_points = 21;

    static std::vector<double> default_dh();  // 61 points on [0, 2400]
    void validate() const;
};

nlohmann::json to_json(const IntradayGrids& g);
IntradayGrids intraday_grids_from_json(const nlohmann::json& j);

/// Fast-scale value tables V_0..V_{M+1} of one intraday cell.
using FastTables = std::vector<GridValueFn>;

struct IntradayResourceTable {
    int cls = 0;
    GridValueFn table;               // over (dh, c)
    std::vector<FastTables> fast;    // per capacity index; each V_m over (s, remaining budget)
};

struct IntradayPriceTable {
    int cls = 0;
    GridValueFn table;                             // over (c, pi)
    std::vector<std::vector<FastTables>> fast;     // [capacity index][pi index]; each V_m over s
};

std::vector<double> soc_axis(const battery::BatteryConfig& cfg, double c, int points);
std::vector<double> control_axis(const battery::BatteryConfig& cfg, int points);

/// Resource cell: state (s, b) with b the remaining exchangeable energy
/// budget; s' must stay in [0, alpha c] and b' >= 0; start s = 0.
FastTables resource_fast_tables(const std::vector<DiscreteDist>& slot_laws, const battery::BatteryConfig& cfg,
                                double c, const IntradayGrids& grids);

/// Price cell: state s, stage cost bill + pi (u+ + u-), no terminal value.
FastTables price_fast_tables(const std::vector<DiscreteDist>& slot_laws, const battery::BatteryConfig& cfg, double c,
                             double pi, const IntradayGrids& grids);

IntradayResourceTable compute_resource_intraday(int cls, const std::vector<DiscreteDist>& slot_laws,
                                                const battery::BatteryConfig& cfg, const IntradayGrids& grids);
IntradayPriceTable compute_price_intraday(int cls, const std::vector<DiscreteDist>& slot_laws,
                                          const battery::BatteryConfig& cfg, const IntradayGrids& grids);

/// All classes at once; cells (class, c) or (class, c, pi) run in parallel.
std::vector<IntradayResourceTable> compute_resource_intraday_all(const battery::NetloadLaws& laws,
                                                                 const battery::BatteryConfig& cfg,
                                                                 const IntradayGrids& grids);
std::vector<IntradayPriceTable> compute_price_intraday_all(const battery::NetloadLaws& laws,
                                                           const battery::BatteryConfig& cfg,
                                                           const IntradayGrids& grids);

/// Fast tables of a class in one binary file: count, then TSGV records.
void write_fast_tables(const std::filesystem::path& path, const std::vector<FastTables>& cells);
std::vector<FastTables> read_fast_tables(const std::filesystem::path& path);

}  // namespace twoscale
