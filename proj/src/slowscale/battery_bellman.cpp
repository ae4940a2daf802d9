#include "twoscale/slowscale/battery_bellman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "twoscale/core/ext_real.hpp"

namespace twoscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_health(const battery::BatteryConfig& cfg) {
    double m = 0.0;
    for (double c : cfg.renewal_grid) m = std::max(m, cfg.health_cap(c));
    return m;
}

double at_grid(const GridValueFn& f, double h, double c) {
    const std::array<double, 2> x{h, c};
    return f.eval_unchecked(x);
}

}  // namespace

Grid battery_slow_grid(const battery::BatteryConfig& cfg, double h_step) {
    cfg.validate();
    if (!(h_step > 0.0)) throw std::invalid_argument("slow grid: h step must be positive");
    const double top = max_health(cfg);
    const auto n = static_cast<std::size_t>(std::llround(top / h_step)) + 1;
    if (std::abs(static_cast<double>(n - 1) * h_step - top) > 1e-9 * std::max(1.0, top))
        throw std::invalid_argument("slow grid: h step must divide the largest health " + std::to_string(top));
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = static_cast<double>(i) * h_step;
    return Grid({std::move(h), cfg.renewal_grid});
}

GridValueFn battery_terminal(const battery::BatteryConfig& cfg, const Grid& slow) {
    return GridValueFn::tabulate(slow, [&](std::span<const double> x) { return cfg.final_cost_at(x[0], x[1]); });
}

RenewalChoice best_renewal(const GridValueFn& next, const battery::BatteryConfig& cfg, double p) {
    RenewalChoice best{0.0, kInf};
    for (double r : cfg.renewal_grid) {
        if (r <= 0.0) continue;
        const double v = low_add(p * r, cfg.gamma * at_grid(next, cfg.health_cap(r), r));
        if (v < best.value) best = {r, v};
    }
    return best;
}

RenewalChoice decide_renewal(const GridValueFn& next, const battery::BatteryConfig& cfg, double h, double c,
                             double p) {
    const RenewalChoice keep{0.0, cfg.gamma * at_grid(next, h, c)};
    const RenewalChoice buy = best_renewal(next, cfg, p);
    return buy.value < keep.value ? buy : keep;
}

std::vector<double> continuation_row(const GridValueFn& next, const battery::BatteryConfig& cfg,
                                     const DiscreteDist& price, std::size_t ci) {
    const Grid& g = next.grid();
    const std::size_t nh = g.extent(0), nc = g.extent(1);
    std::vector<double> renew(price.size());
    for (std::size_t a = 0; a < price.size(); ++a) renew[a] = best_renewal(next, cfg, price.value(a)).value;
    std::vector<double> out(nh);
    for (std::size_t i = 0; i < nh; ++i) {
        const double keep = cfg.gamma * next[i * nc + ci];
        double acc = 0.0;
        for (std::size_t a = 0; a < price.size(); ++a) acc += weighted(price.prob(a), std::min(keep, renew[a]));
        out[i] = acc;
    }
    return out;
}

double TableRow::operator()(double v) const {
    if (v <= x.front()) return y.front();
    if (v >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    const std::size_t hi = static_cast<std::size_t>(it - x.begin()), lo = hi - 1;
    const double t = (v - x[lo]) / (x[hi] - x[lo]);
    if (t == 0.0) return y[lo];
    if (y[lo] == kInf || y[hi] == kInf) return kInf;
    return (1.0 - t) * y[lo] + t * y[hi];
}

TableRow resource_row(const IntradayResourceTable& t, double c) {
    const Grid& g = t.table.grid();
    const std::size_t ci = g.find(1, c);
    if (ci == Grid::npos) throw std::invalid_argument("resource table has no capacity " + std::to_string(c));
    TableRow row;
    row.x = g.axis(0);
    row.y.resize(row.x.size());
    for (std::size_t j = 0; j < row.x.size(); ++j) row.y[j] = t.table[j * g.extent(1) + ci];
    return row;
}

TableRow price_row(const IntradayPriceTable& t, double c) {
    const Grid& g = t.table.grid();
    const std::size_t ci = g.find(0, c);
    if (ci == Grid::npos) throw std::invalid_argument("price table has no capacity " + std::to_string(c));
    TableRow row;
    row.x = g.axis(1);
    row.y.resize(row.x.size());
    for (std::size_t j = 0; j < row.x.size(); ++j) row.y[j] = t.table[ci * g.extent(1) + j];
    return row;
}

ResourceChoice resource_choose(const TableRow& lr, const std::vector<double>& h_axis, const std::vector<double>& g,
                               double h, double cap) {
    const double top = std::min(h, cap);
    ResourceChoice best{0.0, kInf};
    bool any = false;
    // scan from the largest target down so that ties keep the least aging
    for (std::size_t i = h_axis.size(); i-- > 0;) {
        const double hp = h_axis[i];
        if (hp > top + 1e-9) continue;
        const double v = low_add(lr(h - hp), g[i]);
        if (!any || v < best.value) {
            best = {hp, v};
            any = true;
        }
    }
    return best;
}

PriceChoice price_choose(const TableRow& lp, const std::vector<double>& h_axis, const std::vector<double>& g, double h,
                         double cap) {
    PriceChoice best{0.0, -kInf};
    bool any = false;
    for (std::size_t j = 0; j < lp.x.size(); ++j) {
        const double pi = lp.x[j];
        double inner = kInf;
        for (std::size_t i = 0; i < h_axis.size() && h_axis[i] <= cap + 1e-9; ++i)
            inner = std::min(inner, low_add(pi * h_axis[i], g[i]));
        const double v = low_add(low_add(lp.y[j], -pi * h), inner);
        if (!any || v > best.value) {
            best = {pi, v};
            any = true;
        }
    }
    return best;
}

namespace {

void check_inputs(int n_classes, const PeriodicityClassMap& classes, const battery::PriceLaws& prices,
                  const Grid& slow) {
    if (slow.dims() != 2) throw std::invalid_argument("slow grid must be (h, c)");
    if (classes.n_days() < 1) throw std::invalid_argument("empty class map");
    if (n_classes < classes.n_classes())
        throw std::invalid_argument("intraday tables cover " + std::to_string(n_classes) + " classes, map has " +
                                    std::to_string(classes.n_classes()));
    if (static_cast<int>(prices.by_day.size()) < classes.n_days())
        throw std::invalid_argument("battery price laws cover fewer days than the horizon");
}

template <typename RowFn, typename Choose>
SlowValueSeq run_recursion(BoundKind kind, int n_classes, RowFn row_of, Choose choose,
                           const PeriodicityClassMap& classes, const battery::PriceLaws& prices,
                           const battery::BatteryConfig& cfg, const Grid& slow) {
    check_inputs(n_classes, classes, prices, slow);
    const int D = classes.n_days() - 1;
    const auto& h_axis = slow.axis(0);
    const auto& c_axis = slow.axis(1);
    const std::size_t nh = h_axis.size(), nc = c_axis.size();

    // table rows per (class, capacity) are reused every day
    std::vector<std::vector<TableRow>> rows(classes.n_classes(), std::vector<TableRow>(nc));
    for (int i = 0; i < classes.n_classes(); ++i)
        for (std::size_t ci = 0; ci < nc; ++ci) rows[i][ci] = row_of(i, c_axis[ci]);

    SlowValueSeq seq;
    seq.kind = kind;
    seq.days.resize(D + 2);
    seq.days[D + 1] = battery_terminal(cfg, slow);
    for (int d = D; d >= 0; --d) {
        const GridValueFn& next = seq.days[d + 1];
        const int cls = classes.class_of(d);
        std::vector<double> v(slow.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(nc); ++ci) {
            const auto g = continuation_row(next, cfg, prices.at(d), static_cast<std::size_t>(ci));
            const double cap = cfg.health_cap(c_axis[ci]);
            for (std::size_t i = 0; i < nh; ++i)
                v[i * nc + static_cast<std::size_t>(ci)] = choose(rows[cls - 1][ci], h_axis, g, h_axis[i], cap).value;
        }
        seq.days[d] = GridValueFn(slow, std::move(v));
    }
    return seq;
}

}  // namespace

SlowValueSeq resource_bellman_recursion(const std::vector<IntradayResourceTable>& tables,
                                        const PeriodicityClassMap& classes, const battery::PriceLaws& prices,
                                        const battery::BatteryConfig& cfg, const Grid& slow) {
    return run_recursion(
        BoundKind::resource_upper, static_cast<int>(tables.size()),
        [&](int i, double c) { return resource_row(tables.at(i), c); }, resource_choose, classes, prices, cfg, slow);
}

SlowValueSeq price_bellman_recursion(const std::vector<IntradayPriceTable>& tables,
                                     const PeriodicityClassMap& classes, const battery::PriceLaws& prices,
                                     const battery::BatteryConfig& cfg, const Grid& slow) {
    return run_recursion(
        BoundKind::price_lower, static_cast<int>(tables.size()),
        [&](int i, double c) { return price_row(tables.at(i), c); }, price_choose, classes, prices, cfg, slow);
}

}  // namespace twoscale
