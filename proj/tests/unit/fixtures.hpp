#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "twoscale/slowscale/battery_bellman.hpp"

namespace fixtures {

using namespace twoscale;
using battery::BatteryConfig;

inline std::vector<DiscreteDist> random_day(std::uint64_t seed, int slots) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-100.0, 250.0);
    std::vector<DiscreteDist> out;
    for (int m = 0; m < slots; ++m)
        out.emplace_back(std::vector<double>{u(rng), u(rng)}, std::vector<double>{0.5, 0.5});
    return out;
}

struct Setup {
    BatteryConfig cfg;
    IntradayGrids grids;
    battery::NetloadLaws laws;
    std::vector<IntradayResourceTable> R;
    std::vector<IntradayPriceTable> P;
    PeriodicityClassMap classes;
    battery::PriceLaws prices;
    Grid slow;
};

// small battery instance: a day of 16 slots, two classes alternating by day
inline Setup make_setup(int D, std::vector<double> renewal, double price_level, double gamma = 0.999) {
    Setup s;
    s.cfg.renewal_grid = std::move(renewal);
    s.cfg.r_max = std::max(200.0, s.cfg.renewal_grid.back());
    s.cfg.gamma = gamma;
    s.grids.capacity = s.cfg.renewal_grid;
    s.grids.soc_points = 9;
    s.grids.control_points = 9;
    s.laws.by_class = {random_day(1, 16), random_day(2, 16)};
    s.R = compute_resource_intraday_all(s.laws, s.cfg, s.grids);
    s.P = compute_price_intraday_all(s.laws, s.cfg, s.grids);
    std::vector<std::vector<int>> groups(2);
    for (int d = 0; d <= D; ++d) groups[d % 2 == 0 ? 0 : 1].push_back(d);
    if (D == 0)
        s.classes = build_periodicity_classes(0, 1, PeriodicityScheme::trimester);
    else
        s.classes = build_periodicity_classes(D, 2, PeriodicityScheme::custom, groups);
    for (int d = 0; d <= D; ++d)
        s.prices.by_day.emplace_back(std::vector<double>{price_level * 0.8, price_level * 1.2},
                                     std::vector<double>{0.5, 0.5});
    s.slow = battery_slow_grid(s.cfg);
    return s;
}

inline double bill(const std::vector<DiscreteDist>& laws, const BatteryConfig& cfg) {
    double b = 0.0;
    for (std::size_t m = 0; m < laws.size(); ++m)
        for (std::size_t a = 0; a < laws[m].size(); ++a)
            b += laws[m].prob(a) * cfg.tariff.rate(static_cast<int>(m)) * std::max(0.0, laws[m].value(a));
    return b;
}

}  // namespace fixtures
