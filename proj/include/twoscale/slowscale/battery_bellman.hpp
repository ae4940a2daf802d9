#pragma once

#include <vector>

#include "twoscale/battery/laws.hpp"
#include "twoscale/battery/model.hpp"
#include "twoscale/core/grid_value_fn.hpp"
#include "twoscale/intraday/battery_intraday.hpp"
#include "twoscale/intraday/periodicity.hpp"
#include "twoscale/slowscale/value_seq.hpp"

namespace twoscale {

/// Slow state grid over (h, c): h uniform with step h_step on [0, max N(c) c],
/// c the renewal grid.
Grid battery_slow_grid(const battery::BatteryConfig& cfg, double h_step = 40.0);

GridValueFn battery_terminal(const battery::BatteryConfig& cfg, const Grid& slow);

struct RenewalChoice {
    double r = 0.0;
    double value = 0.0;  // p r + gamma V_{d+1}(N(r) r, r)
};

/// Cheapest renewal with r > 0 at battery price p; +inf when the grid has none.
RenewalChoice best_renewal(const GridValueFn& next, const battery::BatteryConfig& cfg, double p);

/// Renewal decision at the end of a day ending in (h, c): r = 0 unless a
/// renewal is strictly cheaper. Ties go to the smallest r.
RenewalChoice decide_renewal(const GridValueFn& next, const battery::BatteryConfig& cfg, double h, double c, double p);

/// G(h', c) = E_p[ min(gamma V(h', c), min_{r>0} p r + gamma V(N(r) r, r)) ] on
/// the h axis of `next` at capacity index ci; renewal is chosen per price atom.
std::vector<double> continuation_row(const GridValueFn& next, const battery::BatteryConfig& cfg,
                                     const DiscreteDist& price, std::size_t ci);

/// Column c of an intraday table as a function of its first axis.
struct TableRow {
    std::vector<double> x;
    std::vector<double> y;
    double operator()(double v) const;  // linear, clamped, +inf only from +inf vertices
};
TableRow resource_row(const IntradayResourceTable& t, double c);
TableRow price_row(const IntradayPriceTable& t, double c);  // over pi

struct ResourceChoice {
    double target = 0.0;  // h_{d+1}
    double value = 0.0;
};

/// min over h' on h_axis with h' <= min(h, cap) of L(h - h') + G(h'); the
/// budget h - h' is capped at the last Δh breakpoint. Ties -> largest h'.
ResourceChoice resource_choose(const TableRow& lr, const std::vector<double>& h_axis, const std::vector<double>& g,
                               double h, double cap);

struct PriceChoice {
    double pi = 0.0;
    double value = 0.0;
};

/// max over pi of L^P(c, pi) - pi h + min_{h' <= cap} (pi h' + G(h')). Ties -> smallest pi.
PriceChoice price_choose(const TableRow& lp, const std::vector<double>& h_axis, const std::vector<double>& g, double h,
                         double cap);

/// Days 0..D use classes.class_of(d) and prices.at(d); V_{D+1} = K.
SlowValueSeq resource_bellman_recursion(const std::vector<IntradayResourceTable>& tables,
                                        const PeriodicityClassMap& classes, const battery::PriceLaws& prices,
                                        const battery::BatteryConfig& cfg, const Grid& slow);
SlowValueSeq price_bellman_recursion(const std::vector<IntradayPriceTable>& tables,
                                     const PeriodicityClassMap& classes, const battery::PriceLaws& prices,
                                     const battery::BatteryConfig& cfg, const Grid& slow);

}  // namespace twoscale
