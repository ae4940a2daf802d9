#include "twoscale/intraday/battery_intraday.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "twoscale/core/serialize.hpp"

namespace twoscale {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Move {
    double ds;      // change of the state of charge
    double used;    // exchanged energy u+ + u-
    double signed_; // u+ - u-, enters the bill
};

std::vector<Move> moves(const battery::BatteryConfig& cfg, const std::vector<double>& u) {
    std::vector<Move> mv;
    mv.reserve(u.size());
    for (double x : u) {
        const double up = std::max(0.0, x);
        const double um = std::max(0.0, -x);
        mv.push_back({cfg.rho_c * up - cfg.rho_d * um, up + um, up - um});
    }
    return mv;
}

// Clamp a next state of charge back onto [0, cap] when it overshoots by
// rounding only; NaN signals infeasibility.
double next_soc(double s, double ds, double cap) {
    const double tol = 1e-9 * std::max(1.0, cap);
    const double y = s + ds;
    if (y < -tol || y > cap + tol) return std::numeric_limits<double>::quiet_NaN();
    return std::clamp(y, 0.0, cap);
}

void check_laws(const std::vector<DiscreteDist>& laws) {
    if (laws.empty() || laws.size() > static_cast<std::size_t>(battery::kSlotsPerDay))
        throw std::invalid_argument("intraday: need between 1 and 48 slot laws");
}

}  // namespace

std::vector<double> IntradayGrids::default_dh() {
    std::vector<double> v(61);
    for (int i = 0; i < 61; ++i) v[i] = 40.0 * i;
    return v;
}

void IntradayGrids::validate() const {
    auto increasing = [](const std::vector<double>& v) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (!(v[i] > v[i - 1])) return false;
        return !v.empty();
    };
    if (!increasing(capacity) || capacity.front() < 0.0) throw std::invalid_argument("grids: bad capacity grid");
    if (!increasing(dh) || dh.front() != 0.0) throw std::invalid_argument("grids: dh grid must start at 0");
    if (!increasing(price) || price.front() < 0.0) throw std::invalid_argument("grids: price grid must be >= 0");
    if (soc_points < 2 || control_points < 2) throw std::invalid_argument("grids: need >= 2 soc and control points");
}

nlohmann::json to_json(const IntradayGrids& g) {
    return {{"capacity", g.capacity}, {"dh", g.dh}, {"price", g.price},
            {"soc_points", g.soc_points}, {"control_points", g.control_points}};
}

IntradayGrids intraday_grids_from_json(const nlohmann::json& j) {
    IntradayGrids g;
    if (j.contains("capacity")) g.capacity = j.at("capacity").get<std::vector<double>>();
    if (j.contains("dh")) g.dh = j.at("dh").get<std::vector<double>>();
    if (j.contains("price")) g.price = j.at("price").get<std::vector<double>>();
    g.soc_points = j.value("soc_points", g.soc_points);
    g.control_points = j.value("control_points", g.control_points);
    g.validate();
    return g;
}

std::vector<double> soc_axis(const battery::BatteryConfig& cfg, double c, int points) {
    const double cap = cfg.soc_cap(c);
    if (cap <= 0.0) return {0.0};
    return Grid::uniform(0.0, cap, static_cast<std::size_t>(points)).axis(0);
}

std::vector<double> control_axis(const battery::BatteryConfig& cfg, int points) {
    auto u = Grid::uniform(cfg.u_min, cfg.u_max, static_cast<std::size_t>(points)).axis(0);
    // snap the point closest to zero onto zero so "do nothing" is always available
    std::size_t k = 0;
    for (std::size_t i = 1; i < u.size(); ++i)
        if (std::abs(u[i]) < std::abs(u[k])) k = i;
    u[k] = 0.0;
    return u;
}

FastTables resource_fast_tables(const std::vector<DiscreteDist>& laws, const battery::BatteryConfig& cfg, double c,
                                const IntradayGrids& grids) {
    check_laws(laws);
    const auto s_ax = soc_axis(cfg, c, grids.soc_points);
    const auto& b_ax = grids.dh;
    const Grid g({s_ax, b_ax});
    const double cap = cfg.soc_cap(c);
    const auto mv = moves(cfg, control_axis(cfg, grids.control_points));
    const std::size_t ns = s_ax.size(), nb = b_ax.size(), nu = mv.size();
    const std::size_t steps = laws.size();

    FastTables V(steps + 1);
    V[steps] = GridValueFn(g, 0.0);
    std::vector<double> cont(nu);
    for (std::size_t m = steps; m-- > 0;) {
        const DiscreteDist& law = laws[m];
        const double rate = cfg.tariff.rate(static_cast<int>(m));
        const GridValueFn& next = V[m + 1];
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < ns; ++i) {
            for (std::size_t j = 0; j < nb; ++j) {
                for (std::size_t k = 0; k < nu; ++k) {
                    const double s1 = next_soc(s_ax[i], mv[k].ds, cap);
                    const double b1 = b_ax[j] - mv[k].used;
                    if (std::isnan(s1) || b1 < -1e-9) {
                        cont[k] = kInf;
                        continue;
                    }
                    const std::array<double, 2> y{s1, std::max(0.0, b1)};
                    cont[k] = next.eval_unchecked(y);
                }
                double acc = 0.0;
                for (std::size_t a = 0; a < law.size(); ++a) {
                    const double w = law.value(a);
                    double best = kInf;
                    for (std::size_t k = 0; k < nu; ++k) {
                        if (cont[k] == kInf) continue;
                        const double t = rate * std::max(0.0, w + mv[k].signed_) + cont[k];
                        if (t < best) best = t;
                    }
                    acc += law.prob(a) == 0.0 ? 0.0 : law.prob(a) * best;
                }
                v[i * nb + j] = acc;
            }
        }
        V[m] = GridValueFn(g, std::move(v));
    }
    return V;
}

FastTables price_fast_tables(const std::vector<DiscreteDist>& laws, const battery::BatteryConfig& cfg, double c,
                             double pi, const IntradayGrids& grids) {
    check_laws(laws);
    const auto s_ax = soc_axis(cfg, c, grids.soc_points);
    const Grid g({s_ax});
    const double cap = cfg.soc_cap(c);
    const auto mv = moves(cfg, control_axis(cfg, grids.control_points));
    const std::size_t ns = s_ax.size(), nu = mv.size();
    const std::size_t steps = laws.size();

    FastTables V(steps + 1);
    V[steps] = GridValueFn(g, 0.0);
    std::vector<double> cont(nu);
    for (std::size_t m = steps; m-- > 0;) {
        const DiscreteDist& law = laws[m];
        const double rate = cfg.tariff.rate(static_cast<int>(m));
        const GridValueFn& next = V[m + 1];
        std::vector<double> v(ns);
        for (std::size_t i = 0; i < ns; ++i) {
            for (std::size_t k = 0; k < nu; ++k) {
                const double s1 = next_soc(s_ax[i], mv[k].ds, cap);
                if (std::isnan(s1)) {
                    cont[k] = kInf;
                    continue;
                }
                const std::array<double, 1> y{s1};
                cont[k] = pi * mv[k].used + next.eval_unchecked(y);
            }
            double acc = 0.0;
            for (std::size_t a = 0; a < law.size(); ++a) {
                const double w = law.value(a);
                double best = kInf;
                for (std::size_t k = 0; k < nu; ++k) {
                    if (cont[k] == kInf) continue;
                    const double t = rate * std::max(0.0, w + mv[k].signed_) + cont[k];
                    if (t < best) best = t;
                }
                acc += law.prob(a) == 0.0 ? 0.0 : law.prob(a) * best;
            }
            v[i] = acc;
        }
        V[m] = GridValueFn(g, std::move(v));
    }
    return V;
}

std::vector<IntradayResourceTable> compute_resource_intraday_all(const battery::NetloadLaws& laws,
                                                                 const battery::BatteryConfig& cfg,
                                                                 const IntradayGrids& grids) {
    grids.validate();
    const int I = laws.n_classes();
    const std::size_t nc = grids.capacity.size();
    std::vector<IntradayResourceTable> out(I);
    for (int i = 0; i < I; ++i) {
        out[i].cls = i + 1;
        out[i].fast.resize(nc);
    }
    const std::int64_t cells = static_cast<std::int64_t>(I) * static_cast<std::int64_t>(nc);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t cell = 0; cell < cells; ++cell) {
        const int i = static_cast<int>(cell / static_cast<std::int64_t>(nc));
        const std::size_t ci = static_cast<std::size_t>(cell % static_cast<std::int64_t>(nc));
        out[i].fast[ci] = resource_fast_tables(laws.for_class(i + 1), cfg, grids.capacity[ci], grids);
    }
    const Grid tg({grids.dh, grids.capacity});
    for (auto& t : out) {
        std::vector<double> v(tg.size());
        for (std::size_t j = 0; j < grids.dh.size(); ++j)
            for (std::size_t ci = 0; ci < nc; ++ci) {
                const std::array<double, 2> start{0.0, grids.dh[j]};
                v[j * nc + ci] = t.fast[ci][0].eval_unchecked(start);
            }
        t.table = GridValueFn(tg, std::move(v));
    }
    return out;
}

std::vector<IntradayPriceTable> compute_price_intraday_all(const battery::NetloadLaws& laws,
                                                           const battery::BatteryConfig& cfg,
                                                           const IntradayGrids& grids) {
    grids.validate();
    const int I = laws.n_classes();
    const std::size_t nc = grids.capacity.size(), np = grids.price.size();
    std::vector<IntradayPriceTable> out(I);
    for (int i = 0; i < I; ++i) {
        out[i].cls = i + 1;
        out[i].fast.assign(nc, std::vector<FastTables>(np));
    }
    const std::int64_t per_class = static_cast<std::int64_t>(nc * np);
    const std::int64_t cells = static_cast<std::int64_t>(I) * per_class;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t cell = 0; cell < cells; ++cell) {
        const int i = static_cast<int>(cell / per_class);
        const std::size_t r = static_cast<std::size_t>(cell % per_class);
        const std::size_t ci = r / np, pj = r % np;
        out[i].fast[ci][pj] = price_fast_tables(laws.for_class(i + 1), cfg, grids.capacity[ci], grids.price[pj], grids);
    }
    const Grid tg({grids.capacity, grids.price});
    for (auto& t : out) {
        std::vector<double> v(tg.size());
        const std::array<double, 1> start{0.0};
        for (std::size_t ci = 0; ci < nc; ++ci)
            for (std::size_t pj = 0; pj < np; ++pj) v[ci * np + pj] = t.fast[ci][pj][0].eval_unchecked(start);
        t.table = GridValueFn(tg, std::move(v));
    }
    return out;
}

IntradayResourceTable compute_resource_intraday(int cls, const std::vector<DiscreteDist>& slot_laws,
                                                const battery::BatteryConfig& cfg, const IntradayGrids& grids) {
    battery::NetloadLaws one{{slot_laws}};
    auto t = std::move(compute_resource_intraday_all(one, cfg, grids).front());
    t.cls = cls;
    return t;
}

IntradayPriceTable compute_price_intraday(int cls, const std::vector<DiscreteDist>& slot_laws,
                                          const battery::BatteryConfig& cfg, const IntradayGrids& grids) {
    battery::NetloadLaws one{{slot_laws}};
    auto t = std::move(compute_price_intraday_all(one, cfg, grids).front());
    t.cls = cls;
    return t;
}

void write_fast_tables(const std::filesystem::path& path, const std::vector<FastTables>& cells) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    const std::uint64_t n = cells.size();
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    for (const auto& cell : cells) {
        const std::uint64_t k = cell.size();
        os.write(reinterpret_cast<const char*>(&k), sizeof k);
        for (const auto& f : cell) write_binary(os, f);
    }
}

std::vector<FastTables> read_fast_tables(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::uint64_t n = 0;
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!is) throw std::runtime_error("truncated fast table file " + path.string());
    std::vector<FastTables> cells(n);
    for (auto& cell : cells) {
        std::uint64_t k = 0;
        is.read(reinterpret_cast<char*>(&k), sizeof k);
        if (!is) throw std::runtime_error("truncated fast table file " + path.string());
        cell.reserve(k);
        for (std::uint64_t i = 0; i < k; ++i) cell.push_back(read_binary(is));
    }
    return cells;
}

}  // namespace twoscale
